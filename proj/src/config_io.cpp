#include "ddmap/config_io.hpp"

#include <set>
#include <string>

#include "ddmap/error.hpp"

namespace ddmap {
namespace {

std::string_view detector_name(LandmarkMode m) {
  switch (m) {
    case LandmarkMode::PeakThreshold: return "peak_threshold";
    case LandmarkMode::DerivativeMax: return "derivative_max";
    case LandmarkMode::External: return "external";
  }
  return "peak_threshold";
}

LandmarkMode parse_detector(const std::string& s) {
  if (s == "peak_threshold") return LandmarkMode::PeakThreshold;
  if (s == "derivative_max") return LandmarkMode::DerivativeMax;
  if (s == "external") return LandmarkMode::External;
  throw ConfigError("unknown detector mode: " + s);
}

// Reads typed fields out of one JSON object, remembering which keys were
// consumed so that leftovers can be reported.
class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj.is_object()) throw ConfigError("config section '" + path_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key '" + qualified(key) + "' has the wrong type");
    }
  }

  const Json* section(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items())
      if (!seen_.count(k)) throw ConfigError("unknown config key: " + qualified(k));
  }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

Json bandwidth_to_json(const BandwidthRule& rule) {
  Json j;
  if (const auto* q = std::get_if<QuartileAllPairs>(&rule)) {
    j["rule"] = "quartile_all_pairs";
    j["fallback_exclude_zeros"] = q->fallback_exclude_zeros;
  } else if (const auto* k = std::get_if<KnnPercentile>(&rule)) {
    j["rule"] = "knn_percentile";
    j["k"] = k->k;
    j["percentile"] = k->percentile;
  } else {
    j["rule"] = "explicit";
    j["h"] = std::get<ExplicitBandwidth>(rule).h;
  }
  return j;
}

BandwidthRule bandwidth_from_json(const Json& j) {
  Reader r(j, "kernel.bandwidth");
  std::string rule;
  r.get("rule", rule);
  BandwidthRule out;
  if (rule == "quartile_all_pairs") {
    QuartileAllPairs q;
    r.get("fallback_exclude_zeros", q.fallback_exclude_zeros);
    out = q;
  } else if (rule == "knn_percentile") {
    KnnPercentile k;
    r.get("k", k.k);
    r.get("percentile", k.percentile);
    out = k;
  } else if (rule == "explicit") {
    ExplicitBandwidth e;
    r.get("h", e.h);
    out = e;
  } else {
    throw ConfigError("unknown bandwidth rule: '" + rule + "'");
  }
  r.finish();
  return out;
}

Json config_to_json(const PipelineConfig& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["preprocess"] = {
      {"lowpass", c.lowpass},
      {"lowpass_order", c.lowpass_order},
      {"lowpass_cutoff_hz", c.lowpass_cutoff_hz},
      {"baseline_removal", c.baseline_removal},
      {"baseline_first_ms", c.baseline_first_ms},
      {"baseline_second_ms", c.baseline_second_ms},
      {"upsample_fs", c.upsample_fs},
      {"detrend_window_s", c.detrend_window_s},
  };
  j["detector"] = {
      {"mode", detector_name(c.detector.mode)},
      {"threshold_k", c.detector.threshold_k},
      {"baseline_window_s", c.detector.baseline_window_s},
      {"refractory_ms", c.detector.refractory_ms},
      {"min_relative_rise", c.detector.min_relative_rise},
  };
  j["rejection"] = {
      {"enabled", c.reject_pulses},
      {"max_wide_maxima", c.rejection.max_wide_maxima},
      {"prominence_fraction", c.rejection.prominence_fraction},
      {"min_width_ms", c.rejection.min_width_ms},
  };
  j["window"] = {
      {"mode", c.window == WindowMode::Fixed ? "fixed" : "min_interval"},
      {"left_ms", c.left_ms},
      {"right_ms", c.right_ms},
  };
  j["normalize"] = {
      {"enabled", c.normalize},
      {"std", c.std_convention == StdConvention::Population ? "population" : "sample"},
  };
  j["kernel"] = {
      {"bandwidth", bandwidth_to_json(c.kernel.bandwidth)},
      {"alpha", c.kernel.alpha},
      {"zero_diagonal", c.kernel.zero_diagonal},
      {"diffusion_time", c.kernel.diffusion_time},
      {"dim", c.kernel.dim},
      {"negative_modes", c.kernel.negative_modes == NegativeModePolicy::Drop ? "drop" : "error"},
      {"dense_limit", c.kernel.dense_limit},
  };
  j["trace"] = {
      {"edr_coordinate", c.edr_coordinate},
      {"fs", c.trace_fs},
      {"halfwidth", c.halfwidth},
  };
  return j;
}

PipelineConfig config_from_json(const Json& tree) {
  Reader top(tree, "");
  std::string mode = "custom";
  top.get("mode", mode);
  PipelineConfig c;
  switch (parse_pipeline_mode(mode)) {
    case PipelineMode::Ecg: c = PipelineConfig::ecg(); break;
    case PipelineMode::Abp: c = PipelineConfig::abp(); break;
    case PipelineMode::Custom: c = PipelineConfig{}; break;
  }

  if (const Json* s = top.section("preprocess")) {
    Reader r(*s, "preprocess");
    r.get("lowpass", c.lowpass);
    r.get("lowpass_order", c.lowpass_order);
    r.get("lowpass_cutoff_hz", c.lowpass_cutoff_hz);
    r.get("baseline_removal", c.baseline_removal);
    r.get("baseline_first_ms", c.baseline_first_ms);
    r.get("baseline_second_ms", c.baseline_second_ms);
    r.get("upsample_fs", c.upsample_fs);
    r.get("detrend_window_s", c.detrend_window_s);
    r.finish();
  }
  if (const Json* s = top.section("detector")) {
    Reader r(*s, "detector");
    std::string m(detector_name(c.detector.mode));
    r.get("mode", m);
    c.detector.mode = parse_detector(m);
    r.get("threshold_k", c.detector.threshold_k);
    r.get("baseline_window_s", c.detector.baseline_window_s);
    r.get("refractory_ms", c.detector.refractory_ms);
    r.get("min_relative_rise", c.detector.min_relative_rise);
    r.finish();
  }
  if (const Json* s = top.section("rejection")) {
    Reader r(*s, "rejection");
    r.get("enabled", c.reject_pulses);
    r.get("max_wide_maxima", c.rejection.max_wide_maxima);
    r.get("prominence_fraction", c.rejection.prominence_fraction);
    r.get("min_width_ms", c.rejection.min_width_ms);
    r.finish();
  }
  if (const Json* s = top.section("window")) {
    Reader r(*s, "window");
    std::string m = c.window == WindowMode::Fixed ? "fixed" : "min_interval";
    r.get("mode", m);
    if (m == "fixed")
      c.window = WindowMode::Fixed;
    else if (m == "min_interval")
      c.window = WindowMode::MinInterval;
    else
      throw ConfigError("unknown window mode: " + m);
    r.get("left_ms", c.left_ms);
    r.get("right_ms", c.right_ms);
    r.finish();
  }
  if (const Json* s = top.section("normalize")) {
    Reader r(*s, "normalize");
    r.get("enabled", c.normalize);
    std::string conv = c.std_convention == StdConvention::Population ? "population" : "sample";
    r.get("std", conv);
    if (conv == "population")
      c.std_convention = StdConvention::Population;
    else if (conv == "sample")
      c.std_convention = StdConvention::Sample;
    else
      throw ConfigError("unknown std convention: " + conv);
    r.finish();
  }
  if (const Json* s = top.section("kernel")) {
    Reader r(*s, "kernel");
    if (const Json* b = r.section("bandwidth")) c.kernel.bandwidth = bandwidth_from_json(*b);
    r.get("alpha", c.kernel.alpha);
    r.get("zero_diagonal", c.kernel.zero_diagonal);
    r.get("diffusion_time", c.kernel.diffusion_time);
    r.get("dim", c.kernel.dim);
    std::string neg = c.kernel.negative_modes == NegativeModePolicy::Drop ? "drop" : "error";
    r.get("negative_modes", neg);
    if (neg == "drop")
      c.kernel.negative_modes = NegativeModePolicy::Drop;
    else if (neg == "error")
      c.kernel.negative_modes = NegativeModePolicy::Error;
    else
      throw ConfigError("unknown negative_modes policy: " + neg);
    r.get("dense_limit", c.kernel.dense_limit);
    r.finish();
  }
  if (const Json* s = top.section("trace")) {
    Reader r(*s, "trace");
    r.get("edr_coordinate", c.edr_coordinate);
    r.get("fs", c.trace_fs);
    r.get("halfwidth", c.halfwidth);
    r.finish();
  }
  top.finish();

  if (!(c.kernel.alpha >= 0.0 && c.kernel.alpha <= 1.0))
    throw ConfigError("kernel.alpha must lie in [0, 1]");
  if (!(c.kernel.diffusion_time > 0.0)) throw ConfigError("kernel.diffusion_time must be > 0");
  if (c.kernel.dim < 1) throw ConfigError("kernel.dim must be at least 1");
  if (c.edr_coordinate < 1 || c.edr_coordinate > c.kernel.dim)
    throw ConfigError("trace.edr_coordinate must lie in 1..kernel.dim");
  return c;
}

void apply_override(Json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like key=value: " + std::string(assignment));
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &tree;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("malformed override key: " + key);
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

}  // namespace ddmap
