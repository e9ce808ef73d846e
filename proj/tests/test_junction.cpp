#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jjtrench/errors.hpp"
#include "jjtrench/junction.hpp"

using namespace jjtrench;
using namespace jjtrench::junction;

TEST(Junction, IcRnProduct) {
  EXPECT_NEAR(ic_rn_product_uv(180.0), 282.743, 1e-3);
  EXPECT_DOUBLE_EQ(ic_rn_product_uv(360.0), 2.0 * ic_rn_product_uv(180.0));
}

TEST(Junction, CriticalCurrentExamples) {
  EXPECT_NEAR(critical_current(6600.0), 42.84, 0.01);
  EXPECT_NEAR(critical_current(6600.0, 180.0), 282.743e3 / 6600.0, 1e-3);
  EXPECT_THROW(critical_current(0.0), DomainError);
  EXPECT_THROW(critical_current(-10.0), DomainError);
  EXPECT_THROW(critical_current(100.0, -1.0), DomainError);
}

TEST(Junction, OxidationDoseTable) {
  const double rna[] = {199.1, 391.8, 1381.6, 3114.3};
  const double jc[] = {142.1, 72.2, 20.5, 9.1};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(critical_current_density(rna[i]), jc[i], 0.005 * jc[i]) << rna[i];
  }
}

TEST(Junction, ProductInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rna(1.0, 1e4);
  for (int i = 0; i < 200; ++i) {
    const double r = rna(rng);
    EXPECT_NEAR(critical_current_density(r) * r, 28274.3, 28274.3 * 1e-3);
  }
}

TEST(Junction, LinearInGap) {
  for (double r : {50.0, 391.8, 5000.0}) {
    EXPECT_NEAR(critical_current_density(r, 360.0), 2.0 * critical_current_density(r, 180.0),
                1e-12 * critical_current_density(r, 360.0));
  }
}

TEST(Junction, DensityDecreasesWithRna) {
  double prev = INFINITY;
  for (double r = 10.0; r < 1e4; r *= 1.3) {
    const double j = critical_current_density(r);
    EXPECT_LT(j, prev);
    prev = j;
  }
  EXPECT_THROW(critical_current_density(0.0), DomainError);
}

TEST(Junction, CharacterizeIsUnitConsistent) {
  const auto e = characterize(6600.0, 0.0648);
  EXPECT_NEAR(e.rna_ohm_um2, 427.68, 1e-9);
  // I_c / A in uA/um^2 times 100 is A/cm^2.
  EXPECT_NEAR(e.j_c_a_per_cm2, e.i_c_na * 1e-3 / e.area_um2 * 100.0, 1e-9);
  EXPECT_NEAR(e.j_c_a_per_cm2, critical_current_density(e.rna_ohm_um2), 1e-9);
  EXPECT_NEAR(e.i_c_na * 1e-9 * e.r_n_ohm, ic_rn_product_uv(180.0) * 1e-6, 1e-15);
  EXPECT_THROW(characterize(6600.0, 0.0), DomainError);
}

TEST(Junction, TargetRoundTrip) {
  for (double jc : {9.1, 72.2, 142.1}) {
    for (double area : {0.01, 0.0648, 1.0}) {
      const double rn = rn_for_target(jc, area);
      EXPECT_NEAR(characterize(rn, area).j_c_a_per_cm2, jc, 1e-9 * jc);
    }
  }
  EXPECT_THROW(rn_for_target(0.0, 1.0), DomainError);
}
