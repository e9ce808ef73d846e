#include "jjtrench/fluct.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "jjtrench/errors.hpp"

namespace jjtrench::fluct {
namespace {

// FFTW's planner is not re-entrant; execution on an existing plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    if (plan != nullptr) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

void TimeTrace::validate() const {
  if (!(tau0_s > 0.0) || !std::isfinite(tau0_s)) {
    throw ValidationError("trace tau0_s must be > 0");
  }
  if (values.size() < kMinTraceLength) throw TraceTooShort(values.size(), kMinTraceLength);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("trace value at index " + std::to_string(i) + " is not finite");
    }
  }
}

std::vector<std::size_t> allan_factors(std::size_t n) {
  std::vector<std::size_t> m;
  const std::size_t dense_end = n / 8;
  const std::size_t last = n / 4;
  for (std::size_t k = 1; k <= dense_end; ++k) m.push_back(k);
  if (m.empty() && last >= 1) m.push_back(1);
  const double base = static_cast<double>(std::max<std::size_t>(dense_end, 1));
  for (int step = 1;; ++step) {
    const double v = base * std::pow(10.0, step / 30.0);
    const auto f = static_cast<std::size_t>(std::llround(v));
    if (f > last) break;
    if (f > m.back()) m.push_back(f);
  }
  if (last >= 1 && m.back() < last) m.push_back(last);
  return m;
}

AllanResult overlapping_allan(const TimeTrace& trace) {
  trace.validate();
  const auto factors = allan_factors(trace.values.size());
  return overlapping_allan(trace, factors);
}

AllanResult overlapping_allan(const TimeTrace& trace, std::span<const std::size_t> factors) {
  trace.validate();
  const std::size_t n = trace.values.size();
  const double mean =
      std::accumulate(trace.values.begin(), trace.values.end(), 0.0) / static_cast<double>(n);

  // Prefix sums of the centred values: a window mean is (S[j+m]-S[j])/m.
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + static_cast<long double>(trace.values[i] - mean);
  }

  AllanResult out;
  for (std::size_t m : factors) {
    if (m == 0 || 2 * m > n) continue;
    const std::size_t count = n - 2 * m + 1;
    long double acc = 0.0L;
    for (std::size_t j = 0; j < count; ++j) {
      const long double d = prefix[j + 2 * m] - 2.0L * prefix[j + m] + prefix[j];
      acc += d * d;
    }
    const long double md = static_cast<long double>(m);
    const long double avar = acc / (2.0L * md * md * static_cast<long double>(count));
    out.factors.push_back(m);
    out.taus.push_back(static_cast<double>(m) * trace.tau0_s);
    out.adev.push_back(std::sqrt(static_cast<double>(avar)));
    out.counts.push_back(count);
  }
  return out;
}

std::vector<double> periodic_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

PsdResult welch_psd(const TimeTrace& trace, std::size_t segment_len) {
  trace.validate();
  if (segment_len < 2) throw ValidationError("segment_len must be >= 2");
  const std::size_t n = trace.values.size();
  if (n < segment_len) throw TraceTooShort(n, segment_len);

  const double mean =
      std::accumulate(trace.values.begin(), trace.values.end(), 0.0) / static_cast<double>(n);
  const std::vector<double> window = periodic_hann(segment_len);
  const double window_power =
      std::inner_product(window.begin(), window.end(), window.begin(), 0.0);
  const double fs = 1.0 / trace.tau0_s;
  const std::size_t nfreq = segment_len / 2 + 1;
  const std::size_t step = segment_len / 2;
  const std::size_t segments = 1 + (n - segment_len) / step;

  std::unique_ptr<double, FftwDeleter> in(
      static_cast<double*>(fftw_malloc(sizeof(double) * segment_len)));
  std::unique_ptr<fftw_complex, FftwDeleter> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nfreq)));
  FftwPlan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan.plan = fftw_plan_dft_r2c_1d(static_cast<int>(segment_len), in.get(), spec.get(),
                                     FFTW_ESTIMATE);
  }

  PsdResult out;
  out.segment_count = segments;
  out.freqs.resize(nfreq);
  out.psd.assign(nfreq, 0.0);
  for (std::size_t k = 0; k < nfreq; ++k) {
    out.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(segment_len);
  }

  for (std::size_t s = 0; s < segments; ++s) {
    const std::size_t start = s * step;
    for (std::size_t i = 0; i < segment_len; ++i) {
      in.get()[i] = (trace.values[start + i] - mean) * window[i];
    }
    fftw_execute(plan.plan);
    for (std::size_t k = 0; k < nfreq; ++k) {
      const double re = spec.get()[k][0];
      const double im = spec.get()[k][1];
      out.psd[k] += re * re + im * im;
    }
  }

  // Density scaling; one-sided doubling skips DC and (even length) Nyquist.
  const double scale = 1.0 / (fs * window_power * static_cast<double>(segments));
  for (std::size_t k = 0; k < nfreq; ++k) {
    const bool nyquist = segment_len % 2 == 0 && k == nfreq - 1;
    out.psd[k] *= scale * ((k == 0 || nyquist) ? 1.0 : 2.0);
  }
  return out;
}

std::vector<double> one_over_f_line(double anchor_f, double anchor_psd,
                                    std::span<const double> freqs) {
  std::vector<double> line(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    line[i] = freqs[i] > 0.0 ? anchor_psd * anchor_f / freqs[i]
                             : std::numeric_limits<double>::infinity();
  }
  return line;
}

std::vector<double> white_adev_line(double a_w, std::span<const double> taus) {
  std::vector<double> line(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) line[i] = std::sqrt(a_w / taus[i]);
  return line;
}

ReferenceLines reference_lines(const PsdResult& psd, const AllanResult& allan, double a_w) {
  if (psd.freqs.size() < 2) throw ValidationError("reference lines need >= 2 PSD points");
  if (!(a_w >= 0.0)) throw DomainError("white-noise level must be >= 0");
  ReferenceLines out;
  out.one_over_f = one_over_f_line(psd.freqs[1], psd.psd[1], psd.freqs);
  out.white_psd.assign(psd.freqs.size(), a_w);
  out.white_adev = white_adev_line(a_w, allan.taus);
  return out;
}

std::vector<AllanPeak> allan_local_peaks(const AllanResult& allan, double a_w) {
  std::vector<AllanPeak> peaks;
  const auto& a = allan.adev;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    if (a[i] > a[i - 1] && a[i] >= a[i + 1] && a[i] > std::sqrt(a_w / allan.taus[i])) {
      peaks.push_back({i, allan.taus[i], a[i]});
    }
  }
  return peaks;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

TraceSummary summarize(std::span<const double> values, std::size_t bins) {
  if (values.size() < 4) throw TraceTooShort(values.size(), 4);
  if (bins == 0) throw ValidationError("histogram needs at least one bin");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  TraceSummary s;
  s.count = sorted.size();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / (n - 1.0));
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  s.min = sorted.front();
  s.max = sorted.back();
  s.gauss_mu = s.mean;
  s.gauss_sigma = s.stddev;
  if (s.median == 0.0) throw ZeroMedian();
  s.rcv = s.iqr / s.median;

  auto& h = s.histogram;
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  const double width = (s.max - s.min) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = s.min + width * static_cast<double>(b);
  h.edges.back() = s.max;
  for (double v : sorted) {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - s.min) / width) : 0;
    h.counts[std::min(b, bins - 1)] += 1;
  }
  return s;
}

TraceSummary summarize(const TimeTrace& trace, std::size_t bins) {
  return summarize(std::span<const double>(trace.values), bins);
}

double gaussian_rcv_bound(double sigma, double mean) {
  if (!(mean > 0.0)) throw DomainError("mean must be > 0 for an RCV bound");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  return kGaussianIqrPerSigma * sigma / mean;
}

}  // namespace jjtrench::fluct
