#pragma once

// Fluctuation statistics for coherence-time trajectories: overlapping Allan
// deviation, Welch PSD, quantile summaries and the reference noise lines.
// Trace values are treated as frequency-type data and keep their own units
// (typically microseconds), so ADEV is in the same units as the samples.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace jjtrench::fluct {

inline constexpr std::size_t kMinTraceLength = 16;
inline constexpr std::size_t kDefaultSegmentLength = 128;
inline constexpr double kDefaultWhiteLevel = 6e3;  // us^2/Hz
/// IQR of a unit Gaussian, 2 * Phi^-1(3/4).
inline constexpr double kGaussianIqrPerSigma = 1.3489795003921634;

struct TimeTrace {
  double tau0_s = 0.0;
  std::vector<double> values;
  std::string label;

  void validate() const;
  double duration_s() const { return tau0_s * static_cast<double>(values.size()); }
};

struct AllanResult {
  std::vector<double> taus;             // s
  std::vector<double> adev;             // value units
  std::vector<std::size_t> counts;      // number of differences averaged
  std::vector<std::size_t> factors;     // averaging factor m
};

struct PsdResult {
  std::vector<double> freqs;  // Hz
  std::vector<double> psd;    // value units^2 / Hz, one-sided
  std::size_t segment_count = 0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

struct TraceSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1)
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double rcv = 0.0;
  double min = 0.0;
  double max = 0.0;
  Histogram histogram;
  // Gaussian overlay parameters.
  double gauss_mu = 0.0;
  double gauss_sigma = 0.0;
};

/// Averaging factors: every m up to N/8, then log-spaced (<= 30 per decade)
/// up to N/4.
std::vector<std::size_t> allan_factors(std::size_t n);

AllanResult overlapping_allan(const TimeTrace& trace);

/// Overlapping ADEV at an explicit list of averaging factors.
AllanResult overlapping_allan(const TimeTrace& trace, std::span<const std::size_t> factors);

/// Periodic Hann window of length n.
std::vector<double> periodic_hann(std::size_t n);

PsdResult welch_psd(const TimeTrace& trace, std::size_t segment_len = kDefaultSegmentLength);

struct ReferenceLines {
  std::vector<double> one_over_f;  // on the PSD frequency grid
  std::vector<double> white_psd;   // on the PSD frequency grid
  std::vector<double> white_adev;  // on the Allan tau grid
};

/// Value at each f of a slope -1 line through (anchor_f, anchor_psd).
std::vector<double> one_over_f_line(double anchor_f, double anchor_psd,
                                    std::span<const double> freqs);

/// sqrt(a_w / tau) on the given taus.
std::vector<double> white_adev_line(double a_w, std::span<const double> taus);

/// 1/f line anchored at the second PSD point; white line a_w on both plots.
/// Presentation only; nothing here is fitted.
ReferenceLines reference_lines(const PsdResult& psd, const AllanResult& allan, double a_w);

struct AllanPeak {
  std::size_t index = 0;
  double tau = 0.0;
  double adev = 0.0;
};

/// Local maxima of the ADEV curve that sit above the white-noise line.
std::vector<AllanPeak> allan_local_peaks(const AllanResult& allan, double a_w);

/// Type-7 (linear interpolation) quantile of sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

TraceSummary summarize(std::span<const double> values, std::size_t bins);
TraceSummary summarize(const TimeTrace& trace, std::size_t bins);

/// RCV implied by a Gaussian with the given moments.
double gaussian_rcv_bound(double sigma, double mean);

}  // namespace jjtrench::fluct
