#pragma once

// Least-squares fits of qubit coherence curves.
//
//   relaxation:  A exp(-tau/T1) + C
//   Hahn echo:   A exp(-tau/T2E) sin(2 pi Delta tau + phi) + C
//
// Delays are in microseconds, so Delta comes out in MHz (cycles per us).
// Time constants are fitted through their logarithm to keep them positive.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jjtrench::fit {

enum class DecayModel { Relaxation, Echo };

std::string_view model_name(DecayModel model);
/// Accepts "t1" or "echo"; throws ValidationError otherwise.
DecayModel parse_model(std::string_view name);

std::vector<std::string> parameter_names(DecayModel model);

struct DecayCurve {
  std::vector<double> delays_us;
  std::vector<double> signals;
  std::vector<double> sigmas;  // empty, or one per point

  bool has_sigmas() const { return !sigmas.empty(); }
  void validate(std::size_t min_points) const;
};

struct FitParameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct FitResult {
  DecayModel model = DecayModel::Relaxation;
  std::vector<FitParameter> params;
  double residual_rms = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;

  double value(std::string_view name) const;
  double stderr_of(std::string_view name) const;
  std::vector<double> values() const;
};

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;
  double gradient_tolerance = 1e-8;
};

double model_value(DecayModel model, std::span<const double> params, double tau_us);

/// d(model)/d(param) in natural parameters, written to `out` (size = #params).
void model_gradient(DecayModel model, std::span<const double> params, double tau_us,
                    std::span<double> out);

FitResult fit_t1(const DecayCurve& curve, const FitOptions& options = {});

FitResult fit_echo(const DecayCurve& curve, const FitOptions& options = {});

FitResult fit(DecayModel model, const DecayCurve& curve, const FitOptions& options = {});

struct ResidualDiagnostics {
  double lag1_autocorr = 0.0;
  std::optional<double> reduced_chi_square;  // only with per-point sigmas
  bool pass = false;                         // |lag-1 autocorr| < 0.3
};

ResidualDiagnostics residual_diagnostics(const DecayCurve& curve, const FitResult& result);

}  // namespace jjtrench::fit
