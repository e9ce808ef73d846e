#pragma once

// Ambegaokar-Baratoff estimates of junction critical current from the
// normal-state resistance at zero temperature.

namespace jjtrench::junction {

inline constexpr double kDefaultGapMicroEv = 180.0;

struct JunctionElectrical {
  double r_n_ohm = 0.0;
  double area_um2 = 0.0;
  double delta_uev = kDefaultGapMicroEv;
  // derived
  double i_c_na = 0.0;
  double j_c_a_per_cm2 = 0.0;
  double rna_ohm_um2 = 0.0;
};

/// I_c R_n product pi*Delta/(2e), in micro-volts.
double ic_rn_product_uv(double delta_uev);

double critical_current(double r_n_ohm, double delta_uev = kDefaultGapMicroEv);

double critical_current_density(double rna_ohm_um2, double delta_uev = kDefaultGapMicroEv);

/// Normal resistance that gives critical current density j_c at the given area.
double rn_for_target(double j_c_a_per_cm2, double area_um2,
                     double delta_uev = kDefaultGapMicroEv);

/// Fills every derived field; throws DomainError on non-positive inputs.
JunctionElectrical characterize(double r_n_ohm, double area_um2,
                                double delta_uev = kDefaultGapMicroEv);

}  // namespace jjtrench::junction
