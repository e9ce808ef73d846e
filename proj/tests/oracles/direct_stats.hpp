#pragma once

// Direct-definition estimators used as oracles for the fluctuation module:
// a double-loop overlapping Allan variance and a segmented periodogram with
// an O(L^2) DFT. Deliberately naive.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

inline double direct_overlapping_adev(const std::vector<double>& y, std::size_t m) {
  const std::size_t n = y.size();
  const std::size_t count = n - 2 * m + 1;
  double acc = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      a += y[j + i];
      b += y[j + m + i];
    }
    const double d = b / m - a / m;
    acc += d * d;
  }
  return std::sqrt(acc / (2.0 * count));
}

struct DirectPsd {
  std::vector<double> freqs;
  std::vector<double> psd;
};

inline DirectPsd direct_welch(const std::vector<double>& y, double tau0, std::size_t len) {
  const std::size_t n = y.size();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;

  std::vector<double> w(len);
  double wpow = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    w[i] = std::pow(std::sin(std::numbers::pi * i / len), 2);  // periodic Hann
    wpow += w[i] * w[i];
  }
  const std::size_t step = len / 2;
  const std::size_t segs = 1 + (n - len) / step;
  const std::size_t nf = len / 2 + 1;
  const double fs = 1.0 / tau0;

  DirectPsd out;
  out.psd.assign(nf, 0.0);
  for (std::size_t k = 0; k < nf; ++k) out.freqs.push_back(k * fs / len);
  for (std::size_t s = 0; s < segs; ++s) {
    for (std::size_t k = 0; k < nf; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        acc += (y[s * step + i] - mean) * w[i] *
               std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(i) / double(len));
      }
      out.psd[k] += std::norm(acc);
    }
  }
  for (std::size_t k = 0; k < nf; ++k) {
    const double side = (k == 0 || (len % 2 == 0 && k == nf - 1)) ? 1.0 : 2.0;
    out.psd[k] *= side / (fs * wpow * segs);
  }
  return out;
}

}  // namespace oracle
