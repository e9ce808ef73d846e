#pragma once

// Small dense Levenberg-Marquardt solver for curve fits with a handful of
// parameters. Marquardt diagonal scaling, Nielsen damping update.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace jjtrench::fit {

/// Fills residuals (size n) and, when non-empty, the row-major n x p
/// Jacobian of the residuals at x.
using ResidualFn =
    std::function<void(std::span<const double> x, std::span<double> residuals,
                       std::span<double> jacobian)>;

struct LmOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;      // per component, relative to |x_j| + 1
  double gradient_tolerance = 1e-8;   // max cosine between r and a Jacobian column
  double initial_damping = 1e-3;      // times max diag(J^T J)
  double exact_cost = 0.0;            // cost at or below this counts as an exact fit
};

struct LmResult {
  std::vector<double> x;
  std::vector<double> residuals;
  /// (J^T J)^-1 at the solution, row-major p x p; empty if singular.
  std::vector<double> inverse_normal;
  double cost = 0.0;            // 0.5 * |r|^2
  double gradient_norm = 0.0;   // max_j |J_j . r| / (|J_j| |r|)
  int iterations = 0;
  bool converged = false;
};

/// Converges when the residual is orthogonal to every Jacobian column to
/// within gradient_tolerance, which is invariant to parameter and data scale.
LmResult levenberg_marquardt(const ResidualFn& fn, std::vector<double> x0,
                             std::size_t residual_count, const LmOptions& options = {});

}  // namespace jjtrench::fit
