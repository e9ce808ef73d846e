#include "jjtrench/junction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "jjtrench/errors.hpp"
#include "jjtrench/units.hpp"

namespace jjtrench::junction {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(v));
  }
}

}  // namespace

double ic_rn_product_uv(double delta_uev) {
  require_positive(delta_uev, "delta_uev");
  return std::numbers::pi * delta_uev / 2.0;
}

double critical_current(double r_n_ohm, double delta_uev) {
  require_positive(r_n_ohm, "r_n_ohm");
  // uV / Ohm = uA
  return ic_rn_product_uv(delta_uev) / r_n_ohm * units::kMicroAmpToNanoAmp;
}

double critical_current_density(double rna_ohm_um2, double delta_uev) {
  require_positive(rna_ohm_um2, "rna_ohm_um2");
  // uV / (Ohm um^2) = uA/um^2
  return ic_rn_product_uv(delta_uev) / rna_ohm_um2 * units::kMicroAmpPerUm2ToAmpPerCm2;
}

double rn_for_target(double j_c_a_per_cm2, double area_um2, double delta_uev) {
  require_positive(j_c_a_per_cm2, "j_c");
  require_positive(area_um2, "area_um2");
  const double rna =
      ic_rn_product_uv(delta_uev) * units::kMicroAmpPerUm2ToAmpPerCm2 / j_c_a_per_cm2;
  return rna / area_um2;
}

JunctionElectrical characterize(double r_n_ohm, double area_um2, double delta_uev) {
  require_positive(area_um2, "area_um2");
  JunctionElectrical out;
  out.r_n_ohm = r_n_ohm;
  out.area_um2 = area_um2;
  out.delta_uev = delta_uev;
  out.rna_ohm_um2 = r_n_ohm * area_um2;
  out.i_c_na = critical_current(r_n_ohm, delta_uev);
  out.j_c_a_per_cm2 = critical_current_density(out.rna_ohm_um2, delta_uev);
  return out;
}

}  // namespace jjtrench::junction
