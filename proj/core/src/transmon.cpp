#include "jjtrench/transmon.hpp"

#include <cmath>
#include <limits>

#include "jjtrench/errors.hpp"
#include "jjtrench/units.hpp"

namespace jjtrench::transmon {
namespace {

void require_positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(name + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

void TransmonParams::validate() const {
  if (!(f_qubit_mhz > 0.0)) throw ValidationError("transmon f_qubit_mhz must be > 0");
  if (!(alpha_mhz > 0.0)) throw ValidationError("transmon alpha_mhz must be > 0");
  if (!(kappa_khz > 0.0)) throw ValidationError("transmon kappa_khz must be > 0");
  if (!std::isfinite(chi_khz)) throw ValidationError("transmon chi_khz must be finite");
  if (f_res_ghz < 0.0) throw ValidationError("transmon f_res_ghz must be >= 0");
}

Energies energies_from_spectroscopy(double f_qubit_mhz, double alpha_mhz) {
  require_positive(f_qubit_mhz, "f_qubit_mhz");
  require_positive(alpha_mhz, "alpha_mhz");
  Energies e;
  e.e_c_mhz = alpha_mhz;
  const double plasma = f_qubit_mhz + e.e_c_mhz;
  e.e_j_mhz = plasma * plasma / (8.0 * e.e_c_mhz);
  e.ratio = e.e_j_mhz / e.e_c_mhz;
  e.low_ratio_warning = e.ratio < 10.0;
  return e;
}

double qubit_frequency(double e_j_mhz, double e_c_mhz) {
  require_positive(e_j_mhz, "e_j_mhz");
  require_positive(e_c_mhz, "e_c_mhz");
  return std::sqrt(8.0 * e_j_mhz * e_c_mhz) - e_c_mhz;
}

CoherenceSummary quality_factors(double f_qubit_mhz, double t1_us, double t2e_us,
                                 double boundary_tolerance) {
  require_positive(f_qubit_mhz, "f_qubit_mhz");
  require_positive(t1_us, "t1_us");
  require_positive(t2e_us, "t2e_us");

  CoherenceSummary s;
  s.t1_us = t1_us;
  s.t2e_us = t2e_us;
  // MHz * us is dimensionless
  s.q1 = units::kTwoPi * f_qubit_mhz * t1_us;
  s.q2e = units::kTwoPi * f_qubit_mhz * t2e_us;

  const double limit = 2.0 * t1_us;
  if (t2e_us > limit * (1.0 + boundary_tolerance)) {
    throw UnphysicalDephasing("T2E = " + std::to_string(t2e_us) + " us exceeds 2*T1 = " +
                              std::to_string(limit) + " us");
  }
  if (t2e_us >= limit * (1.0 - boundary_tolerance)) {
    s.q_phi = std::numeric_limits<double>::infinity();
  } else {
    s.q_phi = 1.0 / (1.0 / s.q2e - 1.0 / (2.0 * s.q1));
  }
  return s;
}

double photon_dephasing_bound(double nbar, double kappa_khz, double chi_khz, double f_qubit_mhz,
                              DephasingUnits convention) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("nbar must be >= 0, got " + std::to_string(nbar));
  }
  require_positive(kappa_khz, "kappa_khz");
  require_positive(f_qubit_mhz, "f_qubit_mhz");
  if (!std::isfinite(chi_khz)) throw DomainError("chi_khz must be finite");
  if (nbar == 0.0 || chi_khz == 0.0) return std::numeric_limits<double>::infinity();

  double kappa = kappa_khz * units::kKiloHertz;
  double chi = chi_khz * units::kKiloHertz;
  if (convention == DephasingUnits::StrictAngular) {
    kappa *= units::kTwoPi;
    chi *= units::kTwoPi;
  }
  const double gamma = nbar * kappa * chi * chi / (kappa * kappa + chi * chi);
  return units::kTwoPi * f_qubit_mhz * units::kMegaHertz / gamma;
}

}  // namespace jjtrench::transmon
