#include "ddmap/dynamics_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/SVD>

#include "ddmap/diagnostics.hpp"
#include "ddmap/error.hpp"
#include "ddmap/preprocessing.hpp"
#include "ddmap/spline.hpp"

namespace ddmap {
namespace {

// Runs one pipeline stage, prefixing its name to any failure.
template <class F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

std::vector<double> landmark_times(const LandmarkSequence& lm, double t0) {
  std::vector<double> t(lm.size());
  for (std::size_t i = 0; i < lm.size(); ++i)
    t[i] = t0 + static_cast<double>(lm[i]) / lm.fs();
  return t;
}

}  // namespace

PipelineConfig PipelineConfig::ecg() {
  PipelineConfig c;
  c.mode = PipelineMode::Ecg;
  c.lowpass = true;
  c.baseline_removal = true;
  c.detector.mode = LandmarkMode::PeakThreshold;
  c.window = WindowMode::Fixed;
  c.left_ms = 80.0;
  c.right_ms = 400.0;
  c.normalize = false;
  c.kernel.bandwidth = QuartileAllPairs{};
  c.kernel.alpha = 1.0;
  c.kernel.diffusion_time = 10.0;
  c.kernel.dim = 32;
  return c;
}

PipelineConfig PipelineConfig::abp() {
  PipelineConfig c;
  c.mode = PipelineMode::Abp;
  c.upsample_fs = 2000.0;
  c.detrend_window_s = 2.0;
  c.detector.mode = LandmarkMode::DerivativeMax;
  c.reject_pulses = true;
  c.window = WindowMode::MinInterval;
  c.left_ms = 80.0;
  c.normalize = true;
  c.kernel.bandwidth = KnnPercentile{40, 25.0};
  c.kernel.alpha = 1.0;
  c.kernel.diffusion_time = 1.0;
  c.kernel.dim = 3;
  return c;
}

std::string to_string(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::Ecg: return "ecg";
    case PipelineMode::Abp: return "abp";
    case PipelineMode::Custom: return "custom";
  }
  return "custom";
}

PipelineMode parse_pipeline_mode(std::string_view name) {
  if (name == "ecg") return PipelineMode::Ecg;
  if (name == "abp") return PipelineMode::Abp;
  if (name == "custom") return PipelineMode::Custom;
  throw ConfigError("unknown mode: " + std::string(name));
}

TimeSeries condition_signal(const TimeSeries& x, const PipelineConfig& cfg) {
  TimeSeries y = x;
  if (cfg.upsample_fs > 0.0 && cfg.upsample_fs != y.fs())
    y = stage("upsample", [&] { return fourier_upsample(y, cfg.upsample_fs); });
  if (cfg.lowpass)
    y = stage("lowpass", [&] {
      return butterworth_lowpass_bidirectional(y, cfg.lowpass_order, cfg.lowpass_cutoff_hz);
    });
  if (cfg.baseline_removal)
    y = stage("baseline", [&] {
      return remove_baseline_two_step(y, cfg.baseline_first_ms, cfg.baseline_second_ms);
    });
  if (cfg.detrend_window_s > 0.0)
    y = stage("detrend", [&] { return detrend_median(y, cfg.detrend_window_s); });
  return y;
}

DDmapResult ddmap(const TimeSeries& x, const PipelineConfig& cfg) {
  TimeSeries y = condition_signal(x, cfg);

  DetectorConfig detector = cfg.detector;
  if (detector.mode == LandmarkMode::External && y.fs() != x.fs()) {
    // External landmarks are given on the input grid.
    const double ratio = y.fs() / x.fs();
    for (auto& i : detector.external)
      i = static_cast<std::size_t>(std::llround(static_cast<double>(i) * ratio));
  }
  auto landmarks = stage("detect", [&] { return detect_landmarks(y, detector); });
  if (cfg.reject_pulses)
    landmarks = stage("reject", [&] { return reject_bad_pulses(y, landmarks, cfg.rejection); });

  auto cycles = stage("excise", [&] {
    return cfg.window == WindowMode::Fixed
               ? excise_cycles(y, landmarks, cfg.left_ms, cfg.right_ms)
               : excise_cycles_min_interval(y, landmarks, cfg.left_ms);
  });
  if (cfg.normalize)
    cycles = stage("normalize", [&] { return normalize_cycles(cycles, cfg.std_convention); });
  LandmarkSequence kept(cycles.landmark_indices, y.fs());

  const std::size_t n = cycles.count();
  if (n <= cfg.kernel.dim)
    throw Error("embed: " + std::to_string(n) + " cycles is not more than d = " +
                std::to_string(cfg.kernel.dim));

  auto embedding = stage("embed", [&] {
    const RowMatrix D2 = pairwise_sq_dists(cycles.rows);
    const double scale = cycles.rows.rowwise().squaredNorm().mean();
    // Distances this small relative to the cycles themselves are rounding.
    const double tol = 1e-20 * scale;
    KernelConfig kernel = cfg.kernel;
    if (D2.maxCoeff() <= tol) {
      warn("all cycles are identical; using h = 1 on a constant kernel");
      kernel.bandwidth = ExplicitBandwidth{1.0};
    }
    return diffusion_map_from_distances(D2, kernel, tol);
  });

  return DDmapResult{std::move(y), std::move(kept), std::move(cycles), std::move(embedding)};
}

Eigen::VectorXd top_left_singular_vector(const RowMatrix& E) {
  if (E.size() == 0 || E.cwiseAbs().maxCoeff() == 0.0) throw Error("zero embedding matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(E), Eigen::ComputeThinU);
  Eigen::VectorXd u = svd.matrixU().col(0);
  u /= u.norm();
  canonical_sign(u);
  return u;
}

DynamicsTrace compress_svd(const RowMatrix& E, const LandmarkSequence& landmarks) {
  if (static_cast<std::size_t>(E.rows()) != landmarks.size())
    throw ConfigError("embedding rows and landmarks differ in count");
  const Eigen::VectorXd u = top_left_singular_vector(E);
  DynamicsTrace trace;
  trace.times = landmark_times(landmarks, 0.0);
  trace.values.assign(u.data(), u.data() + u.size());
  trace.source = TraceSource::SvdU;
  return trace;
}

ClusterResult sign_cluster(std::span<const double> u) {
  if (u.empty()) throw ConfigError("empty trace");
  ClusterResult r;
  for (std::size_t i = 0; i < u.size(); ++i) (u[i] >= 0.0 ? r.c1 : r.c2).push_back(i);
  if (r.c1.empty() || r.c2.empty()) {
    warn("single morphology class");
    r.c1_is_ectopic = false;
    r.normal = r.c1.empty() ? r.c2 : r.c1;
  } else {
    if (r.c1.size() == r.c2.size())
      warn("clusters have equal size; declaring C1 (U >= 0) ectopic");
    r.c1_is_ectopic = r.c1.size() <= r.c2.size();
    r.ectopic = r.c1_is_ectopic ? r.c1 : r.c2;
    r.normal = r.c1_is_ectopic ? r.c2 : r.c1;
  }
  r.labels.assign(u.size(), 0);
  for (std::size_t i : r.ectopic) r.labels[i] = 1;
  return r;
}

DynamicsTrace interpolate_trace(std::span<const double> times, std::span<const double> values,
                                double target_fs, double duration) {
  if (times.size() != values.size()) throw ConfigError("times and values differ in length");
  if (times.size() < 4) throw ConfigError("interpolation needs at least 4 support points");
  if (!(target_fs > 0.0)) throw ConfigError("target rate must be positive");
  NaturalCubicSpline spline({times.begin(), times.end()}, {values.begin(), values.end()});

  const double t0 = times.front();
  const double span = times.back() - t0;
  auto count = static_cast<std::size_t>(std::floor(span * target_fs + 1e-9)) + 1;
  if (duration > 0.0)
    count = std::min(count, static_cast<std::size_t>(std::floor(target_fs * duration)));

  DynamicsTrace out;
  out.source = TraceSource::Interpolated;
  out.times.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    out.times[k] = t0 + static_cast<double>(k) / target_fs;
  out.values = spline(out.times);
  return out;
}

DynamicsTrace sliding_normalize(const DynamicsTrace& v, std::size_t halfwidth) {
  const std::size_t n = v.values.size();
  if (n < 2 * halfwidth + 1) throw ConfigError("trace shorter than the normalization window");
  DynamicsTrace out = v;
  out.source = TraceSource::NormalizedV;
  std::size_t flat = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= halfwidth ? i - halfwidth : 0;
    const std::size_t hi = std::min(n - 1, i + halfwidth);
    const double count = static_cast<double>(hi - lo + 1);
    double mean = 0.0, peak = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      mean += v.values[k];
      peak = std::max(peak, std::abs(v.values[k]));
    }
    mean /= count;
    double ss = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) ss += (v.values[k] - mean) * (v.values[k] - mean);
    const double s = std::sqrt(ss / count);
    if (s <= 64.0 * std::numeric_limits<double>::epsilon() * peak || s == 0.0) {
      out.values[i] = 0.0;
      ++flat;
    } else {
      out.values[i] = (v.values[i] - mean) / s;
    }
  }
  if (flat > 0)
    warn(std::to_string(flat) + " sample(s) with zero local spread set to 0 in sliding "
                                "normalization");
  return out;
}

EdrResult derive_edr_from(DDmapResult result, const PipelineConfig& cfg, double duration) {
  const auto& emb = result.embedding;
  if (cfg.edr_coordinate < 1 || cfg.edr_coordinate > emb.dim())
    throw ConfigError("edr coordinate outside 1..d");

  auto u = stage("svd", [&] { return compress_svd(emb.coords, result.landmarks); });
  auto clusters = sign_cluster(u.values);
  u.labels = clusters.labels;

  // Coordinates flat on the normal set are component indicators; they carry
  // no within-class dynamics, so the coordinate index skips them.
  Eigen::Index col = -1;
  std::size_t seen = 0, skipped = 0;
  for (Eigen::Index k = 0; k < emb.coords.cols() && col < 0; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i : clusters.normal) {
      lo = std::min(lo, emb.coords(static_cast<Eigen::Index>(i), k));
      hi = std::max(hi, emb.coords(static_cast<Eigen::Index>(i), k));
    }
    const double scale = emb.coords.col(k).cwiseAbs().maxCoeff();
    if (!(hi - lo > 1e-8 * scale)) {
      ++skipped;
      continue;
    }
    if (++seen == cfg.edr_coordinate) col = k;
  }
  if (col < 0) throw Error("edr: fewer than " + std::to_string(cfg.edr_coordinate) +
                           " coordinates vary on the normal set");
  if (skipped > 0)
    warn("edr: using embedding coordinate " + std::to_string(col + 1) + "; " +
         std::to_string(skipped) + " coordinate(s) constant on the normal set skipped");

  DynamicsTrace coordinate;
  coordinate.source = TraceSource::EmbeddingCoord;
  coordinate.coordinate = static_cast<std::size_t>(col) + 1;
  for (std::size_t i : clusters.normal) {
    coordinate.times.push_back(u.times[i]);
    coordinate.values.push_back(emb.coords(static_cast<Eigen::Index>(i), col));
  }
  auto interpolated = stage("interpolate", [&] {
    return interpolate_trace(coordinate.times, coordinate.values, cfg.trace_fs, duration);
  });
  auto normalized =
      stage("normalize_trace", [&] { return sliding_normalize(interpolated, cfg.halfwidth); });
  return EdrResult{std::move(result), std::move(u),           std::move(clusters),
                   std::move(coordinate), std::move(interpolated), std::move(normalized)};
}

EdrResult derive_edr(const TimeSeries& x, const PipelineConfig& cfg) {
  return derive_edr_from(ddmap(x, cfg), cfg, x.duration());
}

}  // namespace ddmap
