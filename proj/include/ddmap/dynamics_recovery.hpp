#pragma once

// The DDmap pipeline and its downstream analytics: SVD compression of the
// embedding, sign clustering for ectopy, 4 Hz interpolation and sliding
// normalization of an embedding coordinate (the EDR-style trace).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddmap/cycle_extraction.hpp"
#include "ddmap/diffusion_maps.hpp"
#include "ddmap/time_series.hpp"

namespace ddmap {

enum class TraceSource { SvdU, EmbeddingCoord, NormalizedV, Interpolated };

struct DynamicsTrace {
  std::vector<double> times;   // seconds, strictly increasing
  std::vector<double> values;
  TraceSource source = TraceSource::SvdU;
  std::size_t coordinate = 0;  // 1-based, for EmbeddingCoord
  std::vector<int> labels;     // optional, one per sample
};

struct ClusterResult {
  std::vector<std::size_t> c1;  // U >= 0
  std::vector<std::size_t> c2;  // U < 0
  std::vector<std::size_t> ectopic;
  std::vector<std::size_t> normal;
  std::vector<int> labels;  // 1 ectopic, 0 normal, per cycle
  bool c1_is_ectopic = false;
};

enum class PipelineMode { Ecg, Abp, Custom };
enum class WindowMode { Fixed, MinInterval };

struct PipelineConfig {
  PipelineMode mode = PipelineMode::Custom;

  bool lowpass = false;
  int lowpass_order = 3;
  double lowpass_cutoff_hz = 40.0;
  bool baseline_removal = false;
  double baseline_first_ms = 200.0;
  double baseline_second_ms = 600.0;
  double upsample_fs = 0.0;       // 0: keep the input rate
  double detrend_window_s = 0.0;  // 0: no median detrend

  DetectorConfig detector;
  bool reject_pulses = false;
  RejectionConfig rejection;

  WindowMode window = WindowMode::Fixed;
  double left_ms = 80.0;
  double right_ms = 400.0;
  bool normalize = false;
  StdConvention std_convention = StdConvention::Population;

  KernelConfig kernel;

  std::size_t edr_coordinate = 1;  // counts coordinates that vary on the normal set
  double trace_fs = 4.0;
  std::size_t halfwidth = 10;

  /// Lowpass 3rd order at 40 Hz, two-step baseline removal, peak landmarks,
  /// 80/400 ms window, alpha 1, t 10, d 32, quartile bandwidth.
  static PipelineConfig ecg();
  /// Upsample to 2000 Hz, 2 s median detrend, steepest-ascent landmarks,
  /// pulse rejection, shortest-interval window, z-normalized pulses,
  /// alpha 1, t 1, d 3, knn_percentile(40, 25).
  static PipelineConfig abp();
};

std::string to_string(PipelineMode mode);
PipelineMode parse_pipeline_mode(std::string_view name);

struct DDmapResult {
  TimeSeries conditioned;
  LandmarkSequence landmarks;
  CycleMatrix cycles;
  DiffusionEmbedding embedding;
};

/// Preprocessing stages only.
TimeSeries condition_signal(const TimeSeries& x, const PipelineConfig& config);

/// condition -> detect -> (reject) -> excise -> (normalize) -> diffusion map.
/// Stage failures are rethrown with the stage name prefixed; N <= d throws
/// Error.
DDmapResult ddmap(const TimeSeries& x, const PipelineConfig& config);

/// Top left-singular vector, unit norm, canonical sign. Error on E == 0.
Eigen::VectorXd top_left_singular_vector(const RowMatrix& E);

/// U as a trace at the landmark times t_i / fs.
DynamicsTrace compress_svd(const RowMatrix& E, const LandmarkSequence& landmarks);

/// C1 = {U >= 0}, C2 = {U < 0}; the smaller set is ectopic (C1 on a tie).
ClusterResult sign_cluster(std::span<const double> u);

/// Natural spline through (times, values) on a target_fs grid that starts
/// at times.front() and has min(floor(target_fs * duration), points in the
/// support span) samples. Needs at least 4 support points.
DynamicsTrace interpolate_trace(std::span<const double> times, std::span<const double> values,
                                double target_fs = 4.0, double duration = 0.0);

/// (V(i) - local mean) / local RMS deviation over the centered window
/// i - halfwidth .. i + halfwidth, truncated at the ends. Zero-spread
/// windows map to 0 with a warning.
DynamicsTrace sliding_normalize(const DynamicsTrace& v, std::size_t halfwidth = 10);

struct EdrResult {
  DDmapResult ddmap;
  DynamicsTrace u;
  ClusterResult clusters;
  DynamicsTrace coordinate;   // normal-beat values of the chosen coordinate
  DynamicsTrace interpolated;
  DynamicsTrace normalized;
};

/// ddmap -> compress_svd -> sign_cluster -> coordinate restricted to the
/// normal set -> interpolate_trace -> sliding_normalize.
EdrResult derive_edr(const TimeSeries& x, const PipelineConfig& config);

/// The same chain downstream of an existing ddmap result.
EdrResult derive_edr_from(DDmapResult result, const PipelineConfig& config, double duration);

}  // namespace ddmap
