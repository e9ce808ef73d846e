#pragma once

#include <string>
#include <vector>

namespace jjtrench::transmon {

inline constexpr double kDefaultResidualPhotons = 0.01;

struct TransmonParams {
  double f_qubit_mhz = 0.0;
  double alpha_mhz = 0.0;  // magnitude of the (negative) anharmonicity
  double chi_khz = 0.0;    // signed dispersive shift
  double kappa_khz = 0.0;
  double f_res_ghz = 0.0;

  void validate() const;
};

struct Energies {
  double e_c_mhz = 0.0;
  double e_j_mhz = 0.0;
  double ratio = 0.0;
  /// Set when E_J/E_C < 10 (outside the transmon regime).
  bool low_ratio_warning = false;
};

/// E_C = alpha, E_J from f = sqrt(8 E_J E_C) - E_C.
Energies energies_from_spectroscopy(double f_qubit_mhz, double alpha_mhz);

/// Qubit frequency implied by a pair of energies; inverse of the above.
double qubit_frequency(double e_j_mhz, double e_c_mhz);

struct CoherenceSummary {
  double t1_us = 0.0;
  double t2e_us = 0.0;
  double q1 = 0.0;
  double q2e = 0.0;
  double q_phi = 0.0;  // +inf when echo is relaxation limited
};

/// Q = 2 pi f T. Within `boundary_tolerance` (relative) of T2E = 2 T1 the
/// pure-dephasing factor is reported as +inf; beyond it UnphysicalDephasing.
CoherenceSummary quality_factors(double f_qubit_mhz, double t1_us, double t2e_us,
                                 double boundary_tolerance = 0.01);

enum class DephasingUnits {
  /// kappa and chi inserted as ordinary frequencies, rate divided into 2 pi f.
  OrdinaryFrequency,
  /// kappa and chi converted to angular rates first (2 pi smaller result).
  StrictAngular,
};

/// Pure-dephasing quality factor limit from residual resonator photons.
double photon_dephasing_bound(double nbar, double kappa_khz, double chi_khz, double f_qubit_mhz,
                              DephasingUnits convention = DephasingUnits::OrdinaryFrequency);

}  // namespace jjtrench::transmon
