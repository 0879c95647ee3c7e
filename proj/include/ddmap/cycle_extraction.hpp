#pragma once

// Landmark detection, pulse-quality rejection, fixed-window excision and
// per-cycle z-normalization.

#include <cstddef>
#include <vector>

#include "ddmap/matrix.hpp"
#include "ddmap/time_series.hpp"

namespace ddmap {

enum class LandmarkMode { PeakThreshold, DerivativeMax, External };

struct DetectorConfig {
  LandmarkMode mode = LandmarkMode::PeakThreshold;
  double threshold_k = 5.0;      // MAD multiplier for PeakThreshold
  double baseline_window_s = 2.0;  // rolling median / MAD window
  double refractory_ms = 250.0;
  double min_relative_rise = 0.3;  // DerivativeMax: drop rises below this x median rise
  std::vector<std::size_t> external;  // used when mode == External
};

/// PeakThreshold: local maxima above rolling median + k * 1.4826 * rolling
/// MAD, thinned greedily by height with a refractory period.
/// DerivativeMax: for each excursion above the rolling median, the sample of
/// steepest ascent between the preceding trough and the excursion's peak.
/// Throws Error("no cycles detected") when nothing qualifies.
LandmarkSequence detect_landmarks(const TimeSeries& x, const DetectorConfig& config = {});

struct RejectionConfig {
  int max_wide_maxima = 3;
  double prominence_fraction = 0.25;  // of the inter-landmark range
  double min_width_ms = 50.0;         // measured at half prominence
};

/// Number of local maxima in x[lo, hi) whose prominence and width pass the
/// thresholds. Prominence and width are computed inside the segment only.
int count_wide_maxima(const TimeSeries& x, std::size_t lo, std::size_t hi,
                      const RejectionConfig& config);

/// Drops landmark i when the segment up to landmark i+1 holds more than
/// max_wide_maxima wide maxima. The last landmark is judged on a segment as
/// long as the previous interval. Throws Error if every pulse is rejected.
LandmarkSequence reject_bad_pulses(const TimeSeries& x, const LandmarkSequence& lm,
                                   const RejectionConfig& config = {});

enum class StdConvention { Population, Sample };

struct CycleMatrix {
  RowMatrix rows;  // N x p
  double left_ms = 0.0;
  double right_ms = 0.0;
  std::size_t left_samples = 0;   // a
  std::size_t right_samples = 0;  // b
  double fs = 0.0;
  std::vector<std::size_t> landmark_indices;  // one per row
  bool normalized = false;

  std::size_t count() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t length() const { return static_cast<std::size_t>(rows.cols()); }
};

/// Row i is x[t_i - a .. t_i + b] with a = floor(left_ms fs / 1000) and
/// b = floor(right_ms fs / 1000). Windows leaving the signal are dropped
/// with a warning.
CycleMatrix excise_cycles(const TimeSeries& x, const LandmarkSequence& lm, double left_ms = 80.0,
                          double right_ms = 400.0);

/// Same, with window lengths given in samples.
CycleMatrix excise_cycles_samples(const TimeSeries& x, const LandmarkSequence& lm,
                                  std::size_t left, std::size_t right);

/// Pulse window: a = floor(left_ms fs / 1000) to the left and L - a to the
/// right, where L is the shortest inter-landmark interval (p = L + 1).
CycleMatrix excise_cycles_min_interval(const TimeSeries& x, const LandmarkSequence& lm,
                                       double left_ms = 80.0);

/// (row - mean) / std for every row. Throws Error("degenerate cycle") on a
/// constant row.
CycleMatrix normalize_cycles(const CycleMatrix& X,
                             StdConvention convention = StdConvention::Population);

}  // namespace ddmap
