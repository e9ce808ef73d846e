#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "jjtrench/decay_fit.hpp"
#include "jjtrench/errors.hpp"

using namespace jjtrench;
using namespace jjtrench::fit;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

DecayCurve synth(DecayModel model, const std::vector<double>& p, const std::vector<double>& tau,
                 double noise = 0.0, unsigned seed = 0, bool with_sigmas = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  DecayCurve c;
  c.delays_us = tau;
  for (double t : tau) {
    c.signals.push_back(model_value(model, p, t) + (noise > 0.0 ? noise * g(rng) : 0.0));
    if (with_sigmas) c.sigmas.push_back(noise);
  }
  return c;
}

const std::vector<double> kT1Truth{1.0, 140.0, 0.02};
const std::vector<double> kEchoTruth{0.5, 207.0, 0.05, 0.3, 0.5};

std::vector<double> t1_delays() { return linspace(0.0, 600.0, 40); }
std::vector<double> echo_delays() { return linspace(0.0, 400.0, 201); }

}  // namespace

TEST(DecayModel, Names) {
  EXPECT_EQ(parse_model("t1"), DecayModel::Relaxation);
  EXPECT_EQ(parse_model("echo"), DecayModel::Echo);
  EXPECT_THROW(parse_model("ramsey"), ValidationError);
  EXPECT_EQ(parameter_names(DecayModel::Echo).size(), 5u);
  EXPECT_EQ(model_name(DecayModel::Relaxation), "t1");
}

TEST(DecayModel, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const bool echo = trial % 2 == 1;
    const DecayModel m = echo ? DecayModel::Echo : DecayModel::Relaxation;
    std::vector<double> p = echo ? std::vector<double>{0.2 + u(rng), 50 + 300 * u(rng),
                                                       0.01 + 0.1 * u(rng), -3 + 6 * u(rng), u(rng)}
                                 : std::vector<double>{0.2 + u(rng), 20 + 300 * u(rng), u(rng)};
    const double tau = 400.0 * u(rng);
    std::vector<double> grad(p.size());
    model_gradient(m, p, tau, grad);
    for (std::size_t k = 0; k < p.size(); ++k) {
      // Richardson-extrapolated central difference, O(h^4) truncation.
      auto central = [&](double h) {
        auto hi = p, lo = p;
        hi[k] += h;
        lo[k] -= h;
        return (model_value(m, hi, tau) - model_value(m, lo, tau)) / (2.0 * h);
      };
      const double h = 1e-4 * std::max(std::abs(p[k]), 1e-2);
      const double fd = (4.0 * central(h / 2.0) - central(h)) / 3.0;
      const double scale = std::max(std::abs(grad[k]), 1e-6);
      EXPECT_LT(std::abs(fd - grad[k]) / scale, 1e-6) << "param " << k << " trial " << trial;
    }
  }
}

TEST(FitT1, NoiselessRecovery) {
  const auto curve = synth(DecayModel::Relaxation, kT1Truth, t1_delays());
  const auto r = fit_t1(curve);
  ASSERT_TRUE(r.converged);
  const auto v = r.values();
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(v[k] / kT1Truth[k] - 1.0), 1e-6) << k;
  EXPECT_LT(r.residual_rms, 1e-9);
}

TEST(FitT1, ConstantSignalIsDegenerate) {
  DecayCurve c;
  c.delays_us = t1_delays();
  c.signals.assign(c.delays_us.size(), 0.37);
  EXPECT_THROW(fit_t1(c), DegenerateData);
}

TEST(FitT1, Validation) {
  DecayCurve c;
  c.delays_us = {0, 1, 2, 3};
  c.signals = {1, 0.5, 0.25, 0.12};
  EXPECT_THROW(fit_t1(c), ValidationError);
  c.delays_us = {0, 1, 1, 3, 4};
  c.signals = {1, 0.5, 0.25, 0.12, 0.06};
  EXPECT_THROW(fit_t1(c), ValidationError);
  c.delays_us = {0, 1, 2, 3, 4};
  c.sigmas = {0.1, 0.1};
  EXPECT_THROW(fit_t1(c), ValidationError);
}

TEST(FitT1, ScaleEquivariance) {
  const auto base = synth(DecayModel::Relaxation, kT1Truth, t1_delays(), 0.01, 4);
  const auto r0 = fit_t1(base);
  for (auto [c, d] : {std::pair{3.0, 7.0}, std::pair{-0.5, 0.1}, std::pair{1e3, -2e3}}) {
    DecayCurve scaled = base;
    for (double& s : scaled.signals) s = c * s + d;
    const auto r = fit_t1(scaled);
    EXPECT_NEAR(r.value("A"), c * r0.value("A"), 1e-7 * std::abs(c));
    EXPECT_NEAR(r.value("T1"), r0.value("T1"), 1e-7 * r0.value("T1"));
    EXPECT_NEAR(r.value("C"), c * r0.value("C") + d, 1e-7 * std::abs(c) + 1e-9 * std::abs(d));
  }
}

TEST(FitT1, TimeUnitEquivariance) {
  const auto base = synth(DecayModel::Relaxation, kT1Truth, t1_delays(), 0.01, 8);
  const auto r0 = fit_t1(base);
  DecayCurve ns = base;
  for (double& t : ns.delays_us) t *= 1000.0;
  const auto r = fit_t1(ns);
  EXPECT_NEAR(r.value("T1"), 1000.0 * r0.value("T1"), 1e-7 * 1000.0 * r0.value("T1"));
  EXPECT_NEAR(r.value("A"), r0.value("A"), 1e-7);
}

TEST(FitT1, MonteCarloCoverage) {
  int covered = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const auto r = fit_t1(synth(DecayModel::Relaxation, kT1Truth, t1_delays(), 0.01, 1000 + s));
    if (std::abs(r.value("T1") - 140.0) <= 3.0 * r.stderr_of("T1")) ++covered;
  }
  EXPECT_GE(covered, 95);
}

TEST(FitEcho, NoiselessRecovery) {
  const auto curve = synth(DecayModel::Echo, kEchoTruth, echo_delays());
  const auto r = fit_echo(curve);
  ASSERT_TRUE(r.converged);
  const auto v = r.values();
  for (int k = 0; k < 5; ++k) EXPECT_LT(std::abs(v[k] / kEchoTruth[k] - 1.0), 1e-6) << k;
  EXPECT_LT(r.residual_rms, 1e-9);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(FitEcho, CanonicalSignConvention) {
  // Negative amplitude and phase outside (-pi, pi] describe the same curve.
  const std::vector<double> alt{-0.5, 207.0, 0.05, 0.3 + M_PI, 0.5};
  const auto r = fit_echo(synth(DecayModel::Echo, alt, echo_delays()));
  EXPECT_NEAR(r.value("A"), 0.5, 1e-6);
  EXPECT_NEAR(r.value("phi"), 0.3, 1e-6);
}

TEST(FitEcho, PureDecayIsAmbiguousOrZeroDetuning) {
  const auto c = synth(DecayModel::Relaxation, {0.5, 207.0, 0.5}, echo_delays());
  try {
    const auto r = fit_echo(c);
    EXPECT_LE(std::abs(r.value("Delta")), r.stderr_of("Delta"));
  } catch (const AmbiguousFrequency&) {
    SUCCEED();
  }
}

TEST(FitEcho, FewPeriodsWarns) {
  const auto c = synth(DecayModel::Echo, {0.5, 207.0, 0.05, 0.3, 0.5}, linspace(0.0, 50.0, 60));
  const auto r = fit_echo(c);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_NEAR(r.value("Delta"), 0.05, 1e-6);
}

TEST(FitEcho, MinimumPoints) {
  const auto c = synth(DecayModel::Echo, kEchoTruth, linspace(0.0, 100.0, 7));
  EXPECT_THROW(fit_echo(c), ValidationError);
}

TEST(FitEcho, MonteCarloCoverage) {
  std::vector<int> covered(5, 0);
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const auto r = fit_echo(synth(DecayModel::Echo, kEchoTruth, echo_delays(), 0.01, 5000 + s));
    for (int k = 0; k < 5; ++k) {
      if (std::abs(r.params[k].value - kEchoTruth[k]) <= 3.0 * r.params[k].std_error) ++covered[k];
    }
  }
  for (int k = 0; k < 5; ++k) EXPECT_GE(covered[k], 95) << parameter_names(DecayModel::Echo)[k];
}

TEST(Diagnostics, ExactFitPasses) {
  const auto c = synth(DecayModel::Relaxation, kT1Truth, t1_delays());
  const auto d = residual_diagnostics(c, fit_t1(c));
  EXPECT_NEAR(d.lag1_autocorr, 0.0, 1e-12);
  EXPECT_TRUE(d.pass);
  EXPECT_FALSE(d.reduced_chi_square.has_value());
}

TEST(Diagnostics, WrongTimeConstantFails) {
  const auto c = synth(DecayModel::Relaxation, kT1Truth, t1_delays(), 0.002, 3);
  FitResult wrong;
  wrong.model = DecayModel::Relaxation;
  wrong.params = {{"A", 1.0, 0.0}, {"T1", 280.0, 0.0}, {"C", 0.02, 0.0}};
  wrong.converged = true;
  // Oracle: lag-1 autocorrelation of the residuals computed here directly.
  std::vector<double> r;
  for (std::size_t i = 0; i < c.delays_us.size(); ++i) {
    r.push_back(c.signals[i] - (std::exp(-c.delays_us[i] / 280.0) + 0.02));
  }
  double mean = 0.0;
  for (double x : r) mean += x / r.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    den += (r[i] - mean) * (r[i] - mean);
    if (i + 1 < r.size()) num += (r[i] - mean) * (r[i + 1] - mean);
  }
  const auto d = residual_diagnostics(c, wrong);
  EXPECT_NEAR(d.lag1_autocorr, num / den, 1e-12);
  EXPECT_GT(d.lag1_autocorr, 0.3);
  EXPECT_FALSE(d.pass);
}

TEST(Diagnostics, ReducedChiSquareWithKnownSigma) {
  const auto c = synth(DecayModel::Relaxation, kT1Truth, t1_delays(), 0.01, 12, true);
  const auto d = residual_diagnostics(c, fit_t1(c));
  ASSERT_TRUE(d.reduced_chi_square.has_value());
  EXPECT_GE(*d.reduced_chi_square, 0.5);
  EXPECT_LE(*d.reduced_chi_square, 1.5);
}

TEST(Diagnostics, SigmasGiveAbsoluteErrors) {
  const auto c = synth(DecayModel::Relaxation, kT1Truth, t1_delays(), 0.01, 12, true);
  auto unweighted = c;
  unweighted.sigmas.clear();
  const auto a = fit_t1(c);
  const auto b = fit_t1(unweighted);
  EXPECT_NEAR(a.value("T1"), b.value("T1"), 1e-8 * b.value("T1"));
  // The two error estimates differ by the sqrt of the reduced chi-square.
  const double chi = *residual_diagnostics(c, a).reduced_chi_square;
  EXPECT_NEAR(b.stderr_of("T1"), a.stderr_of("T1") * std::sqrt(chi), 1e-6 * b.stderr_of("T1"));
}
