#include "ddmap/cycle_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "ddmap/diagnostics.hpp"
#include "ddmap/error.hpp"
#include "ddmap/preprocessing.hpp"

namespace ddmap {
namespace {

// 1 / Phi^{-1}(3/4): makes the MAD a consistent estimate of a Gaussian sigma.
constexpr double kMadScale = 1.4826;

std::size_t rolling_window(double seconds, double fs, std::size_t n) {
  auto w = static_cast<std::size_t>(std::floor(seconds * fs + 0.5));
  w = std::min(w, n);
  if (w % 2 == 0) --w;
  if (w < 3) throw ConfigError("signal too short for the detector baseline window");
  return w;
}

struct Candidate {
  std::size_t index;
  double score;
};

// Greedy non-maximum suppression: strongest first, no two within `gap`.
std::vector<std::size_t> suppress(std::vector<Candidate> c, std::size_t gap) {
  std::stable_sort(c.begin(), c.end(),
                   [](const Candidate& l, const Candidate& r) { return l.score > r.score; });
  std::set<std::size_t> kept;
  for (const auto& cand : c) {
    auto next = kept.lower_bound(cand.index);
    if (next != kept.end() && *next - cand.index < gap) continue;
    if (next != kept.begin() && cand.index - *std::prev(next) < gap) continue;
    kept.insert(cand.index);
  }
  return {kept.begin(), kept.end()};
}

std::vector<std::size_t> peak_threshold(const TimeSeries& x, const DetectorConfig& cfg) {
  const auto s = x.samples();
  const std::size_t n = s.size();
  const std::size_t w = rolling_window(cfg.baseline_window_s, x.fs(), n);
  const auto med = running_median(s, w);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(s[i] - med[i]);
  const auto mad = running_median(dev, w);

  std::vector<Candidate> cands;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
    if (s[i] > med[i] + cfg.threshold_k * kMadScale * mad[i]) cands.push_back({i, s[i]});
  }
  const auto gap = static_cast<std::size_t>(std::ceil(cfg.refractory_ms * x.fs() / 1000.0));
  return suppress(std::move(cands), std::max<std::size_t>(gap, 1));
}

std::vector<std::size_t> derivative_max(const TimeSeries& x, const DetectorConfig& cfg) {
  const auto s = x.samples();
  const std::size_t n = s.size();
  const std::size_t w = rolling_window(cfg.baseline_window_s, x.fs(), n);
  const auto med = running_median(s, w);

  std::vector<Candidate> cands;
  std::size_t prev_end = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!(s[i] > med[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < n && s[i] > med[i]) ++i;
    const std::size_t end = i;  // excursion is [start, end)

    const auto peak = static_cast<std::size_t>(
        std::max_element(s.begin() + static_cast<std::ptrdiff_t>(start),
                         s.begin() + static_cast<std::ptrdiff_t>(end)) - s.begin());
    const auto foot = static_cast<std::size_t>(
        std::min_element(s.begin() + static_cast<std::ptrdiff_t>(prev_end),
                         s.begin() + static_cast<std::ptrdiff_t>(start + 1)) - s.begin());
    prev_end = end;
    if (peak <= foot || start == 0) continue;  // no complete ascent observed

    std::size_t best = foot;
    double best_slope = -INFINITY;
    for (std::size_t k = foot; k < peak; ++k) {
      const double slope = s[k + 1] - s[k];
      if (slope > best_slope) {
        best_slope = slope;
        best = k;
      }
    }
    cands.push_back({best, s[peak] - s[foot]});
  }
  const auto gap = static_cast<std::size_t>(std::ceil(cfg.refractory_ms * x.fs() / 1000.0));
  auto kept = suppress(cands, std::max<std::size_t>(gap, 1));
  if (kept.empty()) return kept;

  std::map<std::size_t, double> rise_at;
  for (const auto& c : cands) rise_at.emplace(c.index, c.score);
  std::vector<double> rises;
  for (std::size_t k : kept) rises.push_back(rise_at.at(k));
  std::vector<double> sorted = rises;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double floor_rise = cfg.min_relative_rise * sorted[sorted.size() / 2];
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < kept.size(); ++k)
    if (rises[k] >= floor_rise) out.push_back(kept[k]);
  return out;
}

struct PeakShape {
  double prominence;
  double width;  // samples, at half prominence
};

PeakShape peak_shape(std::span<const double> s, std::size_t j) {
  const double h = s[j];
  double left_min = h;
  for (std::size_t k = j; k-- > 0;) {
    if (s[k] > h) break;
    left_min = std::min(left_min, s[k]);
  }
  double right_min = h;
  for (std::size_t k = j + 1; k < s.size(); ++k) {
    if (s[k] > h) break;
    right_min = std::min(right_min, s[k]);
  }
  const double prom = h - std::max(left_min, right_min);
  const double ref = h - 0.5 * prom;

  double left = 0.0;
  for (std::size_t k = j; k-- > 0;) {
    if (s[k] < ref) {
      left = static_cast<double>(k) + (ref - s[k]) / (s[k + 1] - s[k]);
      break;
    }
  }
  double right = static_cast<double>(s.size() - 1);
  for (std::size_t k = j + 1; k < s.size(); ++k) {
    if (s[k] < ref) {
      right = static_cast<double>(k) - (ref - s[k]) / (s[k - 1] - s[k]);
      break;
    }
  }
  return {prom, right - left};
}

}  // namespace

LandmarkSequence detect_landmarks(const TimeSeries& x, const DetectorConfig& config) {
  std::vector<std::size_t> idx;
  switch (config.mode) {
    case LandmarkMode::PeakThreshold: idx = peak_threshold(x, config); break;
    case LandmarkMode::DerivativeMax: idx = derivative_max(x, config); break;
    case LandmarkMode::External: {
      LandmarkSequence lm(config.external, x.fs());
      lm.check_within(x.size());
      idx = config.external;
      break;
    }
  }
  if (idx.empty()) throw Error("no cycles detected");
  return LandmarkSequence(std::move(idx), x.fs());
}

int count_wide_maxima(const TimeSeries& x, std::size_t lo, std::size_t hi,
                      const RejectionConfig& config) {
  if (hi > x.size() || lo >= hi) throw ConfigError("invalid segment");
  const auto s = x.samples().subspan(lo, hi - lo);
  if (s.size() < 3) return 0;
  const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
  const double range = *mx - *mn;
  const double min_width = config.min_width_ms * x.fs() / 1000.0;
  int count = 0;
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    if (!(s[j] > s[j - 1] && s[j] >= s[j + 1])) continue;
    const auto shape = peak_shape(s, j);
    if (shape.prominence >= config.prominence_fraction * range && shape.prominence > 0.0 &&
        shape.width >= min_width)
      ++count;
  }
  return count;
}

LandmarkSequence reject_bad_pulses(const TimeSeries& x, const LandmarkSequence& lm,
                                   const RejectionConfig& config) {
  if (lm.empty()) throw ConfigError("no landmarks to screen");
  lm.check_within(x.size());
  const std::size_t n = x.size();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < lm.size(); ++i) {
    const std::size_t lo = lm[i];
    std::size_t hi;
    if (i + 1 < lm.size())
      hi = lm[i + 1];
    else if (i > 0)
      hi = std::min(n, lo + (lm[i] - lm[i - 1]));
    else
      hi = n;
    if (hi <= lo + 2 || count_wide_maxima(x, lo, hi, config) <= config.max_wide_maxima)
      kept.push_back(lm[i]);
  }
  if (kept.empty()) throw Error("all pulses rejected");
  return LandmarkSequence(std::move(kept), lm.fs());
}

CycleMatrix excise_cycles_samples(const TimeSeries& x, const LandmarkSequence& lm,
                                  std::size_t left, std::size_t right) {
  const std::size_t p = left + right + 1;
  if (p <= 2) throw ConfigError("cycle window must span more than two samples");
  const std::size_t n = x.size();
  std::vector<std::size_t> keep;
  std::size_t dropped = 0;
  for (std::size_t t : lm.indices()) {
    if (t >= left && t + right < n)
      keep.push_back(t);
    else
      ++dropped;
  }
  if (dropped > 0)
    warn(std::to_string(dropped) + " landmark(s) dropped: cycle window exceeds signal bounds");
  if (keep.empty()) throw Error("no cycle window fits inside the signal");

  CycleMatrix X;
  X.rows.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(p));
  const auto s = x.samples();
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < p; ++j)
      X.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s[keep[i] - left + j];
  X.left_samples = left;
  X.right_samples = right;
  X.fs = x.fs();
  X.left_ms = 1000.0 * static_cast<double>(left) / x.fs();
  X.right_ms = 1000.0 * static_cast<double>(right) / x.fs();
  X.landmark_indices = std::move(keep);
  return X;
}

CycleMatrix excise_cycles(const TimeSeries& x, const LandmarkSequence& lm, double left_ms,
                          double right_ms) {
  if (left_ms < 0.0 || right_ms < 0.0) throw ConfigError("window extents must be non-negative");
  // The tiny offset keeps exact products such as 0.08 * 200 from flooring to 15.
  const auto a = static_cast<std::size_t>(std::floor(left_ms * x.fs() / 1000.0 + 1e-9));
  const auto b = static_cast<std::size_t>(std::floor(right_ms * x.fs() / 1000.0 + 1e-9));
  auto X = excise_cycles_samples(x, lm, a, b);
  X.left_ms = left_ms;
  X.right_ms = right_ms;
  return X;
}

CycleMatrix excise_cycles_min_interval(const TimeSeries& x, const LandmarkSequence& lm,
                                       double left_ms) {
  if (lm.size() < 2) throw ConfigError("need at least two landmarks for the pulse window");
  std::size_t L = lm[1] - lm[0];
  for (std::size_t i = 2; i < lm.size(); ++i) L = std::min(L, lm[i] - lm[i - 1]);
  const auto a = static_cast<std::size_t>(std::floor(left_ms * x.fs() / 1000.0 + 1e-9));
  if (L <= a + 1) throw Error("shortest pulse interval is within the left window extent");
  return excise_cycles_samples(x, lm, a, L - a);
}

CycleMatrix normalize_cycles(const CycleMatrix& X, StdConvention convention) {
  const Eigen::Index p = X.rows.cols();
  const double denom = convention == StdConvention::Population ? static_cast<double>(p)
                                                               : static_cast<double>(p - 1);
  if (denom <= 0.0) throw ConfigError("cycles too short to normalize");
  CycleMatrix out = X;
  for (Eigen::Index i = 0; i < X.rows.rows(); ++i) {
    const auto row = X.rows.row(i);
    if (row.maxCoeff() == row.minCoeff())
      throw Error("degenerate cycle at row " + std::to_string(i));
    const double mu = row.mean();
    const auto centered = (row.array() - mu).matrix();
    const double sigma = std::sqrt(centered.squaredNorm() / denom);
    out.rows.row(i) = centered / sigma;
  }
  out.normalized = true;
  return out;
}

}  // namespace ddmap
