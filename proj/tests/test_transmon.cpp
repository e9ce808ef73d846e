#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "jjtrench/errors.hpp"
#include "jjtrench/transmon.hpp"

using namespace jjtrench;
using namespace jjtrench::transmon;

namespace {

struct Column {
  const char* name;
  double f_mhz, alpha_mhz, ratio, t1_us, t2e_us, chi_khz, kappa_khz;
};

const Column kQubits[] = {
    {"Q5", 2661.0, 168.0, 35.45, 61.24, 39.08, -90, 181},
    {"Q7", 2714.2, 190.0, 29.21, 66.42, 76.06, -110, 206},
    {"Q10", 2838.1, 198.0, 29.39, 14.07, 24.35, -50, 204},
    {"Q20", 2811.6, 190.5, 31.04, 184.79, 207.15, -70, 667},
    {"Q150", 2828.0, 177.0, 36.03, 141.18, 225.75, -70, 278},
};

}  // namespace

TEST(Energies, TabulatedRatios) {
  for (const auto& q : kQubits) {
    const auto e = energies_from_spectroscopy(q.f_mhz, q.alpha_mhz);
    EXPECT_NEAR(e.ratio, q.ratio, 0.005 * q.ratio) << q.name;
    EXPECT_DOUBLE_EQ(e.e_c_mhz, q.alpha_mhz);
    EXPECT_FALSE(e.low_ratio_warning);
  }
  EXPECT_NEAR(energies_from_spectroscopy(2811.6, 190.5).ratio, 31.04, 0.01);
}

TEST(Energies, RoundTrip) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> f(2000.0, 8000.0), a(100.0, 400.0);
  for (int i = 0; i < 200; ++i) {
    const double fq = f(rng), alpha = a(rng);
    const auto e = energies_from_spectroscopy(fq, alpha);
    EXPECT_NEAR(qubit_frequency(e.e_j_mhz, e.e_c_mhz), fq, 1e-9 * fq);
  }
}

TEST(Energies, Errors) {
  EXPECT_THROW(energies_from_spectroscopy(0.0, 190.0), DomainError);
  EXPECT_THROW(energies_from_spectroscopy(2800.0, 0.0), DomainError);
  EXPECT_TRUE(energies_from_spectroscopy(400.0, 190.0).low_ratio_warning);
}

TEST(QualityFactors, Examples) {
  const auto q20 = quality_factors(2811.6, 184.79, 207.15);
  EXPECT_NEAR(q20.q1, 3.26e6, 0.01 * 3.26e6);
  EXPECT_NEAR(q20.q1, 2.0 * M_PI * 2811.6 * 184.79, 1e-6);

  const auto q150 = quality_factors(2828.0, 141.18, 225.75);
  EXPECT_NEAR(q150.q1, 2.51e6, 0.005e6);
  EXPECT_NEAR(q150.q2e, 4.01e6, 0.005e6);
  const double direct = 1.0 / (1.0 / q150.q2e - 1.0 / (2.0 * q150.q1));
  EXPECT_NEAR(q150.q_phi, direct, 1e-6 * direct);
  EXPECT_NEAR(q150.q_phi, 2.001e7, 0.001e7);
}

TEST(QualityFactors, RelaxationLimitedBoundary) {
  EXPECT_TRUE(std::isinf(quality_factors(2800.0, 100.0, 200.0).q_phi));
  EXPECT_TRUE(std::isinf(quality_factors(2800.0, 100.0, 201.0).q_phi));
  EXPECT_TRUE(std::isinf(quality_factors(2800.0, 100.0, 199.0).q_phi));
  EXPECT_TRUE(std::isfinite(quality_factors(2800.0, 100.0, 195.0).q_phi));
  EXPECT_THROW(quality_factors(2800.0, 100.0, 210.0), UnphysicalDephasing);
  EXPECT_THROW(quality_factors(2800.0, 0.0, 10.0), DomainError);
}

TEST(QualityFactors, DephasingNeverBelowEcho) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> t1(1.0, 500.0), frac(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double t = t1(rng);
    const auto q = quality_factors(3000.0, t, 2.0 * t * frac(rng));
    EXPECT_GE(q.q_phi, q.q2e);
  }
}

TEST(PhotonBound, QuotedExtremes) {
  EXPECT_NEAR(photon_dephasing_bound(0.01, 206, 110, 2714.2), 3.73e7, 0.02 * 3.73e7);
  EXPECT_NEAR(photon_dephasing_bound(0.01, 667, 70, 2811.6), 2.43e8, 0.02 * 2.43e8);
  // Sign of chi is irrelevant.
  EXPECT_DOUBLE_EQ(photon_dephasing_bound(0.01, 667, -70, 2811.6),
                   photon_dephasing_bound(0.01, 667, 70, 2811.6));
}

TEST(PhotonBound, Q7IsLowestQ20Highest) {
  double lo = INFINITY, hi = 0.0;
  const char* lo_name = "";
  const char* hi_name = "";
  for (const auto& q : kQubits) {
    const double b = photon_dephasing_bound(kDefaultResidualPhotons, q.kappa_khz, q.chi_khz, q.f_mhz);
    if (b < lo) lo = b, lo_name = q.name;
    if (b > hi) hi = b, hi_name = q.name;
  }
  EXPECT_STREQ(lo_name, "Q7");
  EXPECT_STREQ(hi_name, "Q20");
}

TEST(PhotonBound, AngularConventionIsTwoPiSmaller) {
  const double pub = photon_dephasing_bound(0.01, 206, 110, 2714.2);
  const double ang = photon_dephasing_bound(0.01, 206, 110, 2714.2, DephasingUnits::StrictAngular);
  EXPECT_NEAR(pub / ang, 2.0 * M_PI, 1e-9);
}

TEST(PhotonBound, LimitsAndMonotonicity) {
  EXPECT_TRUE(std::isinf(photon_dephasing_bound(0.0, 206, 110, 2714.2)));
  EXPECT_TRUE(std::isinf(photon_dephasing_bound(0.01, 206, 0, 2714.2)));
  EXPECT_THROW(photon_dephasing_bound(-0.01, 206, 110, 2714.2), DomainError);
  EXPECT_THROW(photon_dephasing_bound(0.01, 0, 110, 2714.2), DomainError);

  double prev = INFINITY;
  for (double n = 0.001; n < 1.0; n *= 2.0) {
    const double b = photon_dephasing_bound(n, 206, 110, 2714.2);
    EXPECT_LT(b, prev);
    prev = b;
  }
  // Rate grows with chi^2 at fixed kappa, so the bound shrinks.
  prev = INFINITY;
  for (double chi = 10.0; chi < 2000.0; chi *= 1.5) {
    const double b = photon_dephasing_bound(0.01, 206, chi, 2714.2);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(TransmonParams, Validate) {
  TransmonParams p{2811.6, 190.5, -70, 667, 6.65};
  EXPECT_NO_THROW(p.validate());
  p.kappa_khz = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
}
