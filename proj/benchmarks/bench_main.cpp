#include <benchmark/benchmark.h>

#include <random>

#include "jjtrench/decay_fit.hpp"
#include "jjtrench/fluct.hpp"
#include "jjtrench/geometry.hpp"

using namespace jjtrench;

namespace {

fluct::TimeTrace white(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(140.8, 18.7);
  fluct::TimeTrace t{30.0, std::vector<double>(n), "bench"};
  for (double& v : t.values) v = g(rng);
  return t;
}

fit::DecayCurve noisy(fit::DecayModel m, const std::vector<double>& p, int n, double span) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.01);
  fit::DecayCurve c;
  for (int i = 0; i < n; ++i) {
    const double tau = span * i / (n - 1);
    c.delays_us.push_back(tau);
    c.signals.push_back(fit::model_value(m, p, tau) + g(rng));
  }
  return c;
}

void BM_OverlappingAllan(benchmark::State& state) {
  const auto t = white(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fluct::overlapping_allan(t));
}
BENCHMARK(BM_OverlappingAllan)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

void BM_WelchPsd(benchmark::State& state) {
  const auto t = white(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fluct::welch_psd(t, 128));
}
BENCHMARK(BM_WelchPsd)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMicrosecond);

void BM_Summarize(benchmark::State& state) {
  const auto t = white(4320);
  for (auto _ : state) benchmark::DoNotOptimize(fluct::summarize(t, 30));
}
BENCHMARK(BM_Summarize);

void BM_FitT1(benchmark::State& state) {
  const auto c = noisy(fit::DecayModel::Relaxation, {1.0, 140.0, 0.02}, 40, 600.0);
  for (auto _ : state) benchmark::DoNotOptimize(fit::fit_t1(c));
}
BENCHMARK(BM_FitT1)->Unit(benchmark::kMicrosecond);

void BM_FitEcho(benchmark::State& state) {
  const auto c = noisy(fit::DecayModel::Echo, {0.5, 207.0, 0.05, 0.3, 0.5}, 201, 400.0);
  for (auto _ : state) benchmark::DoNotOptimize(fit::fit_echo(c));
}
BENCHMARK(BM_FitEcho)->Unit(benchmark::kMicrosecond);

void BM_JunctionGeometry(benchmark::State& state) {
  const geometry::TrenchProfile p{1100.0, 87.0, {{600.0, 1000.0}, {180.0, 2891.0}, {600.0, 1000.0}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometry::junction_geometry(p, {49.0, 30.5}, {-49.0, 123.0}));
  }
}
BENCHMARK(BM_JunctionGeometry);

}  // namespace

BENCHMARK_MAIN();
