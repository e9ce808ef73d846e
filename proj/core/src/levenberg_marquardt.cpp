#include "jjtrench/levenberg_marquardt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace jjtrench::fit {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Evaluation {
  Eigen::VectorXd r;
  RowMatrix jac;
  double cost = 0.0;
};

Evaluation evaluate(const ResidualFn& fn, const Eigen::VectorXd& x, std::size_t n,
                    bool with_jacobian) {
  const auto p = static_cast<std::size_t>(x.size());
  Evaluation e;
  e.r.resize(static_cast<Eigen::Index>(n));
  if (with_jacobian) e.jac.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  fn(std::span<const double>(x.data(), p), std::span<double>(e.r.data(), n),
     with_jacobian ? std::span<double>(e.jac.data(), n * p) : std::span<double>());
  e.cost = 0.5 * e.r.squaredNorm();
  return e;
}

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& fn, std::vector<double> x0,
                             std::size_t residual_count, const LmOptions& options) {
  const auto p = static_cast<Eigen::Index>(x0.size());
  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(x0.data(), p);

  Evaluation cur = evaluate(fn, x, residual_count, true);
  Eigen::MatrixXd normal = cur.jac.transpose() * cur.jac;
  Eigen::VectorXd grad = cur.jac.transpose() * cur.r;

  double lambda = options.initial_damping * std::max(normal.diagonal().maxCoeff(), 1e-300);
  double nu = 2.0;
  bool converged = false;
  int iter = 0;

  auto cosine = [p](const Eigen::MatrixXd& nrm, const Eigen::VectorXd& g, const Eigen::VectorXd& r) {
    const double rnorm = r.norm();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double cnorm = std::sqrt(nrm(j, j));
      if (cnorm > 0.0 && rnorm > 0.0) worst = std::max(worst, std::abs(g(j)) / (cnorm * rnorm));
    }
    return worst;
  };
  auto scaled_gradient = [&] { return cosine(normal, grad, cur.r); };
  auto done = [&] {
    return cur.cost <= options.exact_cost || scaled_gradient() < options.gradient_tolerance;
  };

  for (; iter < options.max_iterations; ++iter) {
    if (!std::isfinite(cur.cost)) break;
    if (done()) {
      converged = true;
      break;
    }

    Eigen::VectorXd diag = normal.diagonal().cwiseMax(1e-300);
    Eigen::MatrixXd damped = normal;
    damped.diagonal() += lambda * diag;
    Eigen::VectorXd step = damped.ldlt().solve(-grad);
    if (!step.allFinite()) {
      lambda *= nu;
      nu *= 2.0;
      continue;
    }

    if ((step.array().abs() / (x.array().abs() + 1.0)).maxCoeff() <= options.step_tolerance) {
      converged = done();
      break;
    }

    Eigen::VectorXd trial_x = x + step;
    Evaluation trial = evaluate(fn, trial_x, residual_count, true);
    const double predicted = 0.5 * step.dot(lambda * diag.cwiseProduct(step) - grad);
    // Reduction from the residual difference avoids cancelling two nearly
    // equal costs close to the minimum.
    const double actual = 0.5 * (cur.r - trial.r).dot(cur.r + trial.r);
    double rho = (predicted > 0.0 && std::isfinite(trial.cost)) ? actual / predicted : -1.0;

    Eigen::MatrixXd trial_normal = trial.jac.transpose() * trial.jac;
    Eigen::VectorXd trial_grad = trial.jac.transpose() * trial.r;
    // Once the expected gain is below the rounding noise of the residuals,
    // the cost can no longer rank steps; the gradient still can.
    const double resolution =
        16.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(residual_count)) * cur.cost;
    if (predicted > 0.0 && predicted < resolution && std::isfinite(trial.cost)) {
      rho = cosine(trial_normal, trial_grad, trial.r) < scaled_gradient() ? 1.0 : -1.0;
    }

    if (rho > 0.0) {
      x = std::move(trial_x);
      cur = std::move(trial);
      normal = std::move(trial_normal);
      grad = std::move(trial_grad);
      const double t = 2.0 * rho - 1.0;
      lambda *= std::max(1.0 / 3.0, 1.0 - t * t * t);
      nu = 2.0;
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (!std::isfinite(lambda) || lambda > 1e300) break;
    }
  }
  if (!converged && done()) converged = true;

  LmResult out;
  out.x.assign(x.data(), x.data() + p);
  out.residuals.assign(cur.r.data(), cur.r.data() + cur.r.size());
  out.cost = cur.cost;
  out.gradient_norm = scaled_gradient();
  out.iterations = iter;
  out.converged = converged;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (lu.isInvertible()) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> inv = lu.inverse();
    out.inverse_normal.assign(inv.data(), inv.data() + p * p);
  }
  return out;
}

}  // namespace jjtrench::fit
