#pragma once

// Independent reference computations for the tests. Everything here is
// written from the textbook definition, without calling into the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Average ranks for ties.
inline std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x), ry = ranks(y);
  return pearson(rx, ry);
}

inline double ls_slope(std::span<const double> t, std::span<const double> y) {
  const double mt = mean(t), my = mean(y);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  return num / den;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Amplitude of the sinusoid at `freq` by direct projection (exact for an
// integer number of periods).
inline double tone_amplitude(std::span<const double> x, double fs, double freq) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    acc += x[k] * std::polar(1.0, -2.0 * kPi * freq * static_cast<double>(k) / fs);
  return 2.0 * std::abs(acc) / static_cast<double>(x.size());
}

struct Spectrum {
  std::vector<double> freq;
  std::vector<double> power;

  double peak_frequency(double lo = 0.0, double hi = 1e300) const {
    double best = -1.0, f = 0.0;
    for (std::size_t k = 0; k < freq.size(); ++k)
      if (freq[k] >= lo && freq[k] <= hi && power[k] > best) {
        best = power[k];
        f = freq[k];
      }
    return f;
  }
  // max / median of the bins inside [lo, hi].
  double peak_to_median(double lo, double hi) const {
    std::vector<double> band;
    for (std::size_t k = 0; k < freq.size(); ++k)
      if (freq[k] >= lo && freq[k] <= hi) band.push_back(power[k]);
    return *std::max_element(band.begin(), band.end()) / median(band);
  }
};

// One-sided periodogram of the mean-removed segment, naive DFT.
inline Spectrum periodogram(std::span<const double> x, double fs) {
  const std::size_t n = x.size();
  const double m = mean(x);
  Spectrum s;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += (x[j] - m) * std::polar(1.0, -2.0 * kPi * static_cast<double>(k * j) /
                                              static_cast<double>(n));
    s.freq.push_back(static_cast<double>(k) * fs / static_cast<double>(n));
    s.power.push_back(std::norm(acc));
  }
  return s;
}

// Welch estimate: Hann windows of `segment` samples with 50% overlap.
inline Spectrum welch(std::span<const double> x, double fs, std::size_t segment) {
  Spectrum s;
  std::vector<double> w(segment);
  for (std::size_t j = 0; j < segment; ++j)
    w[j] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(j) / static_cast<double>(segment));
  const std::size_t bins = segment / 2 + 1;
  s.power.assign(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k)
    s.freq.push_back(static_cast<double>(k) * fs / static_cast<double>(segment));
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment <= x.size(); start += segment / 2, ++count) {
    const double m = mean(x.subspan(start, segment));
    for (std::size_t k = 0; k < bins; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < segment; ++j)
        acc += w[j] * (x[start + j] - m) *
               std::polar(1.0, -2.0 * kPi * static_cast<double>(k * j) /
                                   static_cast<double>(segment));
      s.power[k] += std::norm(acc);
    }
  }
  for (auto& p : s.power) p /= static_cast<double>(count);
  return s;
}

// Number of detections within `tol` samples of some true landmark, each
// truth used at most once.
inline std::size_t matched(std::span<const std::size_t> detected,
                           std::span<const std::size_t> truth, std::size_t tol) {
  std::size_t hits = 0, j = 0;
  for (std::size_t d : detected) {
    while (j < truth.size() && truth[j] + tol < d) ++j;
    if (j < truth.size() && (truth[j] > d ? truth[j] - d : d - truth[j]) <= tol) {
      ++hits;
      ++j;
    }
  }
  return hits;
}

// Index of the nearest true landmark for each detection.
inline std::vector<std::size_t> nearest(std::span<const std::size_t> detected,
                                        std::span<const std::size_t> truth) {
  std::vector<std::size_t> out;
  for (std::size_t d : detected) {
    const auto it = std::lower_bound(truth.begin(), truth.end(), d);
    std::size_t k = static_cast<std::size_t>(it - truth.begin());
    if (k == truth.size() || (k > 0 && d - truth[k - 1] < truth[k] - d)) --k;
    out.push_back(k);
  }
  return out;
}

}  // namespace oracle
