#include "jjtrench/decay_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <numbers>

#include "jjtrench/errors.hpp"
#include "jjtrench/levenberg_marquardt.hpp"

namespace jjtrench::fit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Internal parameter vectors: log of the time constant replaces T.
//   relaxation: [A, log T1, C]
//   echo:       [A, log T2E, Delta, phi, C]
constexpr std::size_t kRelaxParams = 3;
constexpr std::size_t kEchoParams = 5;

std::size_t param_count(DecayModel model) {
  return model == DecayModel::Relaxation ? kRelaxParams : kEchoParams;
}

double wrap_phase(double phi) {
  phi = std::remainder(phi, kTwoPi);  // [-pi, pi]
  if (phi <= -std::numbers::pi) phi += kTwoPi;
  return phi;
}

double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

double signal_range(const DecayCurve& c) {
  const auto [lo, hi] = std::minmax_element(c.signals.begin(), c.signals.end());
  return *hi - *lo;
}

// Robust noise level from second differences: for white noise the second
// difference has variance 6 sigma^2, and smooth trends mostly cancel.
double noise_floor(const DecayCurve& c) {
  if (c.signals.size() < 3) return 0.0;
  std::vector<double> d2;
  d2.reserve(c.signals.size() - 2);
  for (std::size_t i = 1; i + 1 < c.signals.size(); ++i) {
    d2.push_back(std::abs(c.signals[i + 1] - 2.0 * c.signals[i] + c.signals[i - 1]));
  }
  return 1.4826 * median_of(std::move(d2)) / std::sqrt(6.0);
}

void check_not_degenerate(const DecayCurve& c) {
  const double range = signal_range(c);
  const double noise = noise_floor(c);
  if (range == 0.0 || range <= noise) {
    throw DegenerateData("signal range " + std::to_string(range) +
                         " does not exceed the noise floor " + std::to_string(noise));
  }
}

// Slope of a least-squares line through (x, y).
std::optional<double> regression_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  return sxy / sxx;
}

// Least-squares (A, C) for y ~ A*basis + C. Returns {A, C, ssr}.
std::array<double, 3> solve_amplitude_offset(std::span<const double> basis,
                                             std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double sb = 0, sbb = 0, sy = 0, sby = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sb += basis[i];
    sbb += basis[i] * basis[i];
    sy += y[i];
    sby += basis[i] * y[i];
  }
  const double det = n * sbb - sb * sb;
  double a = 0.0, c = sy / n;
  if (std::abs(det) > 1e-300) {
    a = (n * sby - sb * sy) / det;
    c = (sy - a * sb) / n;
  }
  double ssr = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = a * basis[i] + c - y[i];
    ssr += r * r;
  }
  return {a, c, ssr};
}

std::vector<double> to_natural(std::span<const double> internal) {
  std::vector<double> p(internal.begin(), internal.end());
  p[1] = std::exp(internal[1]);
  return p;
}

// Residual function in internal coordinates, weighted by 1/sigma if given.
ResidualFn make_residual_fn(DecayModel model, const DecayCurve& curve) {
  return [model, &curve](std::span<const double> x, std::span<double> r,
                         std::span<double> jac) {
    const std::size_t p = x.size();
    const std::vector<double> natural = to_natural(x);
    std::vector<double> g(p);
    for (std::size_t i = 0; i < curve.delays_us.size(); ++i) {
      const double tau = curve.delays_us[i];
      const double w = curve.has_sigmas() ? 1.0 / curve.sigmas[i] : 1.0;
      r[i] = w * (model_value(model, natural, tau) - curve.signals[i]);
      if (jac.empty()) continue;
      model_gradient(model, natural, tau, g);
      g[1] *= natural[1];  // chain rule for T = exp(u)
      for (std::size_t j = 0; j < p; ++j) jac[i * p + j] = w * g[j];
    }
  };
}

FitResult finish(DecayModel model, const DecayCurve& curve, const LmResult& lm,
                 const FitOptions& options) {
  const std::size_t n = curve.signals.size();
  const std::size_t p = param_count(model);
  std::vector<double> natural = to_natural(lm.x);

  FitResult out;
  out.model = model;
  out.iterations = lm.iterations;
  out.gradient_norm = lm.gradient_norm;
  out.converged = lm.converged;

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = model_value(model, natural, curve.delays_us[i]) - curve.signals[i];
    ss += r * r;
  }
  out.residual_rms = std::sqrt(ss / static_cast<double>(n));

  // Covariance: absolute when sigmas are supplied, otherwise scaled by the
  // residual variance estimate.
  const double scale =
      curve.has_sigmas() ? 1.0 : 2.0 * lm.cost / static_cast<double>(n - p);
  std::vector<double> se(p, std::numeric_limits<double>::quiet_NaN());
  if (!lm.inverse_normal.empty()) {
    for (std::size_t j = 0; j < p; ++j) {
      se[j] = std::sqrt(std::max(0.0, scale * lm.inverse_normal[j * p + j]));
    }
    se[1] *= natural[1];
  } else {
    out.warnings.emplace_back("singular normal matrix; standard errors unavailable");
  }

  if (model == DecayModel::Echo) {
    // Canonical form: A > 0, Delta >= 0, phi in (-pi, pi].
    double& a = natural[0];
    double& delta = natural[2];
    double& phi = natural[3];
    if (delta < 0.0) {
      delta = -delta;
      phi = std::numbers::pi - phi;
    }
    if (a < 0.0) {
      a = -a;
      phi += std::numbers::pi;
    }
    phi = wrap_phase(phi);
    const double span = curve.delays_us.back() - curve.delays_us.front();
    if (delta * span < 3.0) {
      out.warnings.emplace_back("fewer than 3 oscillation periods sampled (" +
                                std::to_string(delta * span) + ")");
    }
  }

  const auto names = parameter_names(model);
  for (std::size_t j = 0; j < p; ++j) out.params.push_back({names[j], natural[j], se[j]});

  if (!out.converged) {
    throw NonConvergence(std::string(model_name(model)) + " fit did not converge after " +
                         std::to_string(lm.iterations) + " iterations (max " +
                         std::to_string(options.max_iterations) + ", scaled gradient " +
                         std::to_string(lm.gradient_norm) + ")");
  }
  return out;
}

LmResult run_lm(DecayModel model, const DecayCurve& curve, std::vector<double> x0,
                const FitOptions& options) {
  // Residual rms of 1e-12 of the (unit) signal range is an exact fit.
  constexpr double kExactRms = 1e-12;
  double exact = 0.0;
  for (std::size_t i = 0; i < curve.signals.size(); ++i) {
    const double w = curve.has_sigmas() ? kExactRms / curve.sigmas[i] : kExactRms;
    exact += 0.5 * w * w;
  }
  LmOptions lm_opts;
  lm_opts.max_iterations = options.max_iterations;
  lm_opts.step_tolerance = options.step_tolerance;
  lm_opts.gradient_tolerance = options.gradient_tolerance;
  lm_opts.exact_cost = exact;
  return levenberg_marquardt(make_residual_fn(model, curve), std::move(x0),
                             curve.signals.size(), lm_opts);
}

// Fits run on delays divided by the last delay and signals centred on their
// mean and divided by their range, so tolerances act on O(1) numbers and the
// result is equivariant under changes of time or signal units.
struct Normalization {
  double time = 1.0;
  double offset = 0.0;
  double scale = 1.0;
};

DecayCurve normalize(const DecayCurve& c, Normalization& norm) {
  norm.time = c.delays_us.back();
  norm.offset = std::accumulate(c.signals.begin(), c.signals.end(), 0.0) /
                static_cast<double>(c.signals.size());
  norm.scale = signal_range(c);
  DecayCurve out;
  out.delays_us.reserve(c.delays_us.size());
  out.signals.reserve(c.signals.size());
  for (double t : c.delays_us) out.delays_us.push_back(t / norm.time);
  for (double y : c.signals) out.signals.push_back((y - norm.offset) / norm.scale);
  for (double s : c.sigmas) out.sigmas.push_back(s / norm.scale);
  return out;
}

FitResult denormalize(FitResult r, const Normalization& norm) {
  for (auto& p : r.params) {
    if (p.name == "A") {
      p.value *= norm.scale;
      p.std_error *= norm.scale;
    } else if (p.name == "C") {
      p.value = p.value * norm.scale + norm.offset;
      p.std_error *= norm.scale;
    } else if (p.name == "Delta") {
      p.value /= norm.time;
      p.std_error /= norm.time;
    } else if (p.name != "phi") {
      p.value *= norm.time;
      p.std_error *= norm.time;
    }
  }
  r.residual_rms *= norm.scale;
  return r;
}

// Periodogram of the mean-subtracted signal at frequency f (cycles/us);
// a direct sum so non-uniform delays are handled.
double spectral_power(std::span<const double> tau, std::span<const double> z, double f) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < tau.size(); ++i) {
    acc += z[i] * std::polar(1.0, -kTwoPi * f * tau[i]);
  }
  return std::norm(acc);
}

}  // namespace

std::string_view model_name(DecayModel model) {
  return model == DecayModel::Relaxation ? "t1" : "echo";
}

DecayModel parse_model(std::string_view name) {
  if (name == "t1") return DecayModel::Relaxation;
  if (name == "echo") return DecayModel::Echo;
  throw ValidationError("unknown fit model '" + std::string(name) + "' (expected t1 or echo)");
}

std::vector<std::string> parameter_names(DecayModel model) {
  if (model == DecayModel::Relaxation) return {"A", "T1", "C"};
  return {"A", "T2E", "Delta", "phi", "C"};
}

void DecayCurve::validate(std::size_t min_points) const {
  if (delays_us.size() != signals.size()) {
    throw ValidationError("decay curve: delays and signals differ in length");
  }
  if (delays_us.size() < min_points) {
    throw ValidationError("decay curve: need at least " + std::to_string(min_points) +
                          " points, got " + std::to_string(delays_us.size()));
  }
  if (has_sigmas()) {
    if (sigmas.size() != signals.size()) {
      throw ValidationError("decay curve: sigmas and signals differ in length");
    }
    for (double s : sigmas) {
      if (!(s > 0.0)) throw ValidationError("decay curve: sigmas must be > 0");
    }
  }
  for (std::size_t i = 0; i < delays_us.size(); ++i) {
    if (!std::isfinite(delays_us[i]) || !std::isfinite(signals[i])) {
      throw ValidationError("decay curve: non-finite value at row " + std::to_string(i));
    }
    if (delays_us[i] < 0.0) throw ValidationError("decay curve: delays must be >= 0");
    if (i > 0 && !(delays_us[i] > delays_us[i - 1])) {
      throw ValidationError("decay curve: delays must be strictly increasing (row " +
                            std::to_string(i) + ")");
    }
  }
}

double FitResult::value(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.value;
  }
  throw ValidationError("fit result has no parameter '" + std::string(name) + "'");
}

double FitResult::stderr_of(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.std_error;
  }
  throw ValidationError("fit result has no parameter '" + std::string(name) + "'");
}

std::vector<double> FitResult::values() const {
  std::vector<double> v;
  v.reserve(params.size());
  for (const auto& p : params) v.push_back(p.value);
  return v;
}

double model_value(DecayModel model, std::span<const double> p, double tau) {
  if (model == DecayModel::Relaxation) return p[0] * std::exp(-tau / p[1]) + p[2];
  return p[0] * std::exp(-tau / p[1]) * std::sin(kTwoPi * p[2] * tau + p[3]) + p[4];
}

void model_gradient(DecayModel model, std::span<const double> p, double tau,
                    std::span<double> out) {
  const double env = std::exp(-tau / p[1]);
  if (model == DecayModel::Relaxation) {
    out[0] = env;
    out[1] = p[0] * env * tau / (p[1] * p[1]);
    out[2] = 1.0;
    return;
  }
  const double arg = kTwoPi * p[2] * tau + p[3];
  const double s = std::sin(arg);
  const double c = std::cos(arg);
  out[0] = env * s;
  out[1] = p[0] * env * s * tau / (p[1] * p[1]);
  out[2] = p[0] * env * c * kTwoPi * tau;
  out[3] = p[0] * env * c;
  out[4] = 1.0;
}

namespace {

FitResult fit_t1_normalized(const DecayCurve& curve, const FitOptions& options) {
  const auto& tau = curve.delays_us;
  const auto& y = curve.signals;
  const std::size_t n = y.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  const double c0 = std::accumulate(y.end() - static_cast<std::ptrdiff_t>(tail), y.end(), 0.0) /
                    static_cast<double>(tail);
  const double a0 = y.front() - c0;
  const double span = tau.back() - tau.front();

  double t0 = span / 3.0;
  {
    std::vector<double> xs, ls;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(y[i] - c0);
      if (d > 0.05 * std::abs(a0) && d > 0.0) {
        xs.push_back(tau[i]);
        ls.push_back(std::log(d));
      }
    }
    if (auto slope = regression_slope(xs, ls); slope && *slope < 0.0) t0 = -1.0 / *slope;
  }

  std::vector<double> basis(n);
  for (std::size_t i = 0; i < n; ++i) basis[i] = std::exp(-tau[i] / t0);
  const auto [a_ls, c_ls, ssr] = solve_amplitude_offset(basis, y);
  (void)ssr;

  LmResult lm = run_lm(DecayModel::Relaxation, curve, {a_ls, std::log(t0), c_ls}, options);
  return finish(DecayModel::Relaxation, curve, lm, options);
}

FitResult fit_echo_normalized(const DecayCurve& curve, const FitOptions& options) {
  const auto& tau = curve.delays_us;
  const auto& y = curve.signals;
  const std::size_t n = y.size();
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = y[i] - mean;

  const double span = tau.back() - tau.front();
  const double dt = span / static_cast<double>(n - 1);
  const double bin = 1.0 / (static_cast<double>(n) * dt);
  const std::size_t nbins = n / 2;

  std::vector<double> power(nbins + 1, 0.0);
  for (std::size_t k = 1; k <= nbins; ++k) power[k] = spectral_power(tau, z, k * bin);

  // Local maxima of the periodogram over bins 1..nbins.
  std::vector<std::size_t> peaks;
  for (std::size_t k = 1; k <= nbins; ++k) {
    const bool left = k == 1 || power[k] > power[k - 1];
    const bool right = k == nbins || power[k] >= power[k + 1];
    if (left && right) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });
  if (peaks.empty() || power[peaks.front()] <= 0.0) {
    throw AmbiguousFrequency("no spectral peak in the echo signal");
  }
  const std::size_t top = peaks.front();
  if (top == 1) {
    throw AmbiguousFrequency(
        "spectrum peaks at the lowest bin; no resolved oscillation (Delta ~ 0)");
  }
  if (peaks.size() > 1 && power[peaks[1]] >= 0.9 * power[top]) {
    throw AmbiguousFrequency("spectral peaks at " + std::to_string(top * bin) + " and " +
                             std::to_string(peaks[1] * bin) + " MHz are within 10% in power");
  }

  // Refine inside the neighbouring bins.
  double delta0 = top * bin;
  {
    double best = power[top];
    constexpr int kSteps = 128;
    for (int s = 0; s <= kSteps; ++s) {
      const double f = (static_cast<double>(top) - 1.0 + 2.0 * s / kSteps) * bin;
      if (f <= 0.0) continue;
      const double pw = spectral_power(tau, z, f);
      if (pw > best) {
        best = pw;
        delta0 = f;
      }
    }
  }

  // Envelope decay from per-period half ranges.
  double t0 = 2.0 * span;
  {
    const std::size_t chunk =
        std::max<std::size_t>(3, static_cast<std::size_t>(std::lround(1.0 / (delta0 * dt))));
    std::vector<double> centers, logs;
    for (std::size_t start = 0; start + chunk <= n; start += chunk) {
      const auto first = y.begin() + static_cast<std::ptrdiff_t>(start);
      const auto [lo, hi] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(chunk));
      const double amp = 0.5 * (*hi - *lo);
      if (amp <= 0.0) continue;
      centers.push_back(0.5 * (tau[start] + tau[start + chunk - 1]));
      logs.push_back(std::log(amp));
    }
    if (auto slope = regression_slope(centers, logs); slope && *slope < 0.0) t0 = -1.0 / *slope;
  }

  // Phase scan; amplitude and offset are linear given the rest.
  std::array<double, kEchoParams> best_x{};
  double best_ssr = std::numeric_limits<double>::infinity();
  std::vector<double> basis(n);
  for (int k = 0; k < 8; ++k) {
    const double phi = kTwoPi * k / 8.0;
    for (std::size_t i = 0; i < n; ++i) {
      basis[i] = std::exp(-tau[i] / t0) * std::sin(kTwoPi * delta0 * tau[i] + phi);
    }
    const auto [a, c, ssr] = solve_amplitude_offset(basis, y);
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_x = {a, std::log(t0), delta0, phi, c};
    }
  }

  LmResult lm = run_lm(DecayModel::Echo, curve, {best_x.begin(), best_x.end()}, options);
  return finish(DecayModel::Echo, curve, lm, options);
}

}  // namespace

FitResult fit_t1(const DecayCurve& curve, const FitOptions& options) {
  curve.validate(5);
  check_not_degenerate(curve);
  Normalization norm;
  return denormalize(fit_t1_normalized(normalize(curve, norm), options), norm);
}

FitResult fit_echo(const DecayCurve& curve, const FitOptions& options) {
  curve.validate(8);
  check_not_degenerate(curve);
  Normalization norm;
  return denormalize(fit_echo_normalized(normalize(curve, norm), options), norm);
}

FitResult fit(DecayModel model, const DecayCurve& curve, const FitOptions& options) {
  return model == DecayModel::Relaxation ? fit_t1(curve, options) : fit_echo(curve, options);
}

ResidualDiagnostics residual_diagnostics(const DecayCurve& curve, const FitResult& result) {
  const std::size_t n = curve.signals.size();
  const std::vector<double> p = result.values();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = curve.signals[i] - model_value(result.model, p, curve.delays_us[i]);
  }

  ResidualDiagnostics d;
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
  double num = 0.0, den = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (r[i] - mean) * (r[i] - mean);
    ss += r[i] * r[i];
    if (i + 1 < n) num += (r[i] - mean) * (r[i + 1] - mean);
  }
  const double rms = std::sqrt(ss / static_cast<double>(n));
  // Residuals at rounding level carry no structure worth reporting.
  const bool exact = rms <= 1e-9 * signal_range(curve);
  d.lag1_autocorr = (exact || den == 0.0) ? 0.0 : num / den;

  if (curve.has_sigmas()) {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) chi2 += (r[i] / curve.sigmas[i]) * (r[i] / curve.sigmas[i]);
    d.reduced_chi_square = chi2 / static_cast<double>(n - p.size());
  }
  d.pass = std::abs(d.lag1_autocorr) < 0.3;
  return d;
}

}  // namespace jjtrench::fit
