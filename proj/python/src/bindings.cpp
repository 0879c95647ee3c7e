#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ddmap/config_io.hpp"
#include "ddmap/cycle_extraction.hpp"
#include "ddmap/diagnostics.hpp"
#include "ddmap/diffusion_maps.hpp"
#include "ddmap/dynamics_recovery.hpp"
#include "ddmap/error.hpp"
#include "ddmap/preprocessing.hpp"
#include "ddmap/signal_synthesis.hpp"

namespace py = pybind11;
using namespace ddmap;

namespace {

using Vec = Eigen::VectorXd;

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TimeSeries series(const Vec& x, double fs) { return TimeSeries(to_std(x), fs); }

// Runs f with library warnings collected, then re-emits them as Python
// UserWarnings once the call has returned.
template <class F>
auto with_warnings(F&& f) {
  std::vector<std::string> messages;
  auto result = [&] {
    WarningCapture capture;
    auto r = f();
    messages = capture.messages();
    return r;
  }();
  for (const auto& m : messages)
    if (PyErr_WarnEx(PyExc_UserWarning, m.c_str(), 1) != 0) throw py::error_already_set();
  return result;
}

PipelineConfig resolve_config(const std::string& mode, const std::string& config_json,
                              const std::vector<std::string>& overrides) {
  Json tree = config_json.empty() ? Json::object() : Json::parse(config_json, nullptr, false);
  if (tree.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!tree.is_object()) throw ConfigError("config must be a JSON object");
  if (!tree.contains("mode")) tree["mode"] = mode;
  for (const auto& o : overrides) apply_override(tree, o);
  return config_from_json(tree);
}

BandwidthRule bandwidth_rule(const py::object& spec) {
  if (spec.is_none()) return QuartileAllPairs{};
  if (py::isinstance<py::float_>(spec) || py::isinstance<py::int_>(spec))
    return ExplicitBandwidth{spec.cast<double>()};
  if (py::isinstance<py::str>(spec)) {
    const auto s = spec.cast<std::string>();
    if (s == "quartile") return QuartileAllPairs{};
    if (s == "knn") return KnnPercentile{};
    throw ConfigError("unknown bandwidth rule: " + s);
  }
  if (py::isinstance<py::tuple>(spec)) {
    const auto t = spec.cast<py::tuple>();
    if (t.size() == 3 && t[0].cast<std::string>() == "knn")
      return KnnPercentile{t[1].cast<std::size_t>(), t[2].cast<double>()};
  }
  throw ConfigError("bandwidth must be None, a number, 'quartile', 'knn' or ('knn', k, pct)");
}

py::dict embedding_dict(const DiffusionEmbedding& e) {
  py::dict d;
  d["coords"] = e.coords;
  d["eigenvalues"] = e.eigenvalues;
  d["eigenvectors"] = e.eigenvectors;
  d["modes"] = e.modes;
  d["bandwidth"] = e.bandwidth;
  d["alpha"] = e.alpha;
  d["diffusion_time"] = e.diffusion_time;
  d["component_count"] = e.component_count;
  d["max_residual"] = e.max_residual;
  return d;
}

py::dict trace_dict(const DynamicsTrace& t) {
  py::dict d;
  d["times"] = to_eigen(t.times);
  d["values"] = to_eigen(t.values);
  if (!t.labels.empty()) d["labels"] = t.labels;
  return d;
}

py::dict cluster_dict(const ClusterResult& c) {
  py::dict d;
  d["c1"] = c.c1;
  d["c2"] = c.c2;
  d["ectopic"] = c.ectopic;
  d["normal"] = c.normal;
  d["labels"] = c.labels;
  d["c1_is_ectopic"] = c.c1_is_ectopic;
  return d;
}

py::dict ddmap_dict(const DDmapResult& r) {
  py::dict d;
  d["conditioned"] = to_eigen(r.conditioned.values());
  d["fs"] = r.conditioned.fs();
  d["landmarks"] = r.landmarks.indices();
  d["cycles"] = r.cycles.rows;
  d["embedding"] = embedding_dict(r.embedding);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wave-shape synthesis, cycle extraction and diffusion-map dynamics recovery";

  py::register_exception<Error>(m, "DDMapError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("scenario_names", &scenario_names);

  m.def(
      "make_template",
      [](const std::string& kind, std::size_t resolution) {
        const auto t = make_template(kind, resolution);
        return py::make_tuple(to_eigen(t.grid), to_eigen(t.values));
      },
      py::arg("kind"), py::arg("resolution") = 1025,
      "(grid, values) of a wave-shape template on [-1/2, 1/2].");

  m.def(
      "manifold_point",
      [](const std::string& kind, double a, double f, std::size_t resolution) {
        return to_eigen(manifold_point(make_template(kind, resolution), a, f));
      },
      py::arg("kind"), py::arg("a"), py::arg("f"), py::arg("resolution") = 1025);

  m.def(
      "make_scenario",
      [](const std::string& name, std::uint64_t seed, double duration, double fs,
         double noise_std) {
        const auto data = with_warnings([&] {
          return make_scenario(name, seed, ScenarioOptions{duration, fs, noise_std});
        });
        std::vector<double> amp, freq;
        std::vector<int> labels;
        for (const auto& c : data.cycles) {
          amp.push_back(c.amplitude);
          freq.push_back(c.frequency);
          labels.push_back(c.label);
        }
        py::dict d;
        d["signal"] = to_eigen(data.signal.values());
        d["fs"] = data.signal.fs();
        d["landmarks"] = data.landmarks.indices();
        d["landmark_times"] = to_eigen(data.landmark_times);
        d["amplitude"] = to_eigen(amp);
        d["frequency"] = to_eigen(freq);
        d["labels"] = labels;
        d["amplitude_modulator"] = to_eigen(data.amplitude_modulator);
        d["class_names"] = data.class_names;
        d["overlap_fraction"] = data.overlap_fraction;
        d["seed"] = data.seed;
        return d;
      },
      py::arg("name"), py::arg("seed") = 0, py::arg("duration") = 0.0, py::arg("fs") = 0.0,
      py::arg("noise_std") = -1.0);

  // Preprocessing
  m.def(
      "lowpass",
      [](const Vec& x, double fs, int order, double cutoff_hz) {
        return to_eigen(butterworth_lowpass_bidirectional(series(x, fs), order, cutoff_hz).values());
      },
      py::arg("x"), py::arg("fs"), py::arg("order") = 3, py::arg("cutoff_hz") = 40.0);
  m.def(
      "median_filter",
      [](const Vec& x, double fs, double window_ms) {
        return to_eigen(median_filter(series(x, fs), window_ms).values());
      },
      py::arg("x"), py::arg("fs"), py::arg("window_ms"));
  m.def(
      "remove_baseline",
      [](const Vec& x, double fs, double first_ms, double second_ms) {
        return to_eigen(remove_baseline_two_step(series(x, fs), first_ms, second_ms).values());
      },
      py::arg("x"), py::arg("fs"), py::arg("first_ms") = 200.0, py::arg("second_ms") = 600.0);
  m.def(
      "fourier_upsample",
      [](const Vec& x, double fs, double target_fs) {
        return to_eigen(fourier_upsample(series(x, fs), target_fs).values());
      },
      py::arg("x"), py::arg("fs"), py::arg("target_fs"));
  m.def(
      "detrend_median",
      [](const Vec& x, double fs, double window_s) {
        return with_warnings([&] { return to_eigen(detrend_median(series(x, fs), window_s).values()); });
      },
      py::arg("x"), py::arg("fs"), py::arg("window_s") = 2.0);

  // Cycle extraction
  m.def(
      "detect_landmarks",
      [](const Vec& x, double fs, const std::string& mode, double threshold_k,
         double refractory_ms) {
        DetectorConfig cfg;
        if (mode == "peak_threshold")
          cfg.mode = LandmarkMode::PeakThreshold;
        else if (mode == "derivative_max")
          cfg.mode = LandmarkMode::DerivativeMax;
        else
          throw ConfigError("unknown detector mode: " + mode);
        cfg.threshold_k = threshold_k;
        cfg.refractory_ms = refractory_ms;
        return detect_landmarks(series(x, fs), cfg).indices();
      },
      py::arg("x"), py::arg("fs"), py::arg("mode") = "peak_threshold",
      py::arg("threshold_k") = 5.0, py::arg("refractory_ms") = 250.0);
  m.def(
      "excise_cycles",
      [](const Vec& x, double fs, const std::vector<std::size_t>& landmarks, double left_ms,
         double right_ms) {
        const auto X = with_warnings([&] {
          return excise_cycles(series(x, fs), LandmarkSequence(landmarks, fs), left_ms, right_ms);
        });
        return py::make_tuple(X.rows, X.landmark_indices);
      },
      py::arg("x"), py::arg("fs"), py::arg("landmarks"), py::arg("left_ms") = 80.0,
      py::arg("right_ms") = 400.0, "(cycle matrix, kept landmark indices).");
  m.def(
      "normalize_cycles",
      [](const RowMatrix& rows, const std::string& convention) {
        CycleMatrix X;
        X.rows = rows;
        if (convention != "population" && convention != "sample")
          throw ConfigError("unknown std convention: " + convention);
        return normalize_cycles(X, convention == "population" ? StdConvention::Population
                                                              : StdConvention::Sample)
            .rows;
      },
      py::arg("cycles"), py::arg("std") = "population");

  // Diffusion maps
  m.def(
      "diffusion_map",
      [](const RowMatrix& X, const py::object& bandwidth, double alpha, double t, std::size_t d,
         bool zero_diagonal) {
        KernelConfig cfg;
        cfg.bandwidth = bandwidth_rule(bandwidth);
        cfg.alpha = alpha;
        cfg.diffusion_time = t;
        cfg.dim = d;
        cfg.zero_diagonal = zero_diagonal;
        return embedding_dict(with_warnings([&] { return diffusion_map(X, cfg); }));
      },
      py::arg("points"), py::arg("bandwidth") = py::none(), py::arg("alpha") = 1.0,
      py::arg("t") = 1.0, py::arg("d") = 2, py::arg("zero_diagonal") = false);
  m.def("pairwise_sq_dists", &pairwise_sq_dists, py::arg("points"));

  // Pipeline and downstream analytics
  m.def(
      "resolved_config",
      [](const std::string& mode, const std::string& config, const std::vector<std::string>& set) {
        return config_to_json(resolve_config(mode, config, set)).dump();
      },
      py::arg("mode") = "ecg", py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
      "The fully resolved pipeline configuration as JSON text.");
  m.def(
      "run_ddmap",
      [](const Vec& x, double fs, const std::string& mode, const std::string& config,
         const std::vector<std::string>& set) {
        const auto cfg = resolve_config(mode, config, set);
        return ddmap_dict(with_warnings([&] { return ddmap::ddmap(series(x, fs), cfg); }));
      },
      py::arg("x"), py::arg("fs"), py::arg("mode") = "ecg", py::arg("config") = "",
      py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "derive_edr",
      [](const Vec& x, double fs, const std::string& mode, const std::string& config,
         const std::vector<std::string>& set) {
        const auto cfg = resolve_config(mode, config, set);
        const auto r = with_warnings([&] { return derive_edr(series(x, fs), cfg); });
        py::dict d = ddmap_dict(r.ddmap);
        d["u"] = trace_dict(r.u);
        d["clusters"] = cluster_dict(r.clusters);
        d["coordinate"] = trace_dict(r.coordinate);
        d["coordinate_index"] = r.coordinate.coordinate;
        d["interpolated"] = trace_dict(r.interpolated);
        d["edr"] = trace_dict(r.normalized);
        return d;
      },
      py::arg("x"), py::arg("fs"), py::arg("mode") = "ecg", py::arg("config") = "",
      py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "compress_svd",
      [](const RowMatrix& E) { return top_left_singular_vector(E); }, py::arg("embedding"));
  m.def(
      "sign_cluster",
      [](const Vec& u) { return cluster_dict(with_warnings([&] { return sign_cluster(to_std(u)); })); },
      py::arg("u"));
  m.def(
      "interpolate_trace",
      [](const Vec& times, const Vec& values, double target_fs, double duration) {
        const auto t = interpolate_trace(to_std(times), to_std(values), target_fs, duration);
        return py::make_tuple(to_eigen(t.times), to_eigen(t.values));
      },
      py::arg("times"), py::arg("values"), py::arg("target_fs") = 4.0, py::arg("duration") = 0.0);
  m.def(
      "sliding_normalize",
      [](const Vec& values, std::size_t halfwidth) {
        DynamicsTrace v;
        v.values = to_std(values);
        v.times.resize(v.values.size());
        for (std::size_t i = 0; i < v.times.size(); ++i) v.times[i] = static_cast<double>(i);
        return to_eigen(with_warnings([&] { return sliding_normalize(v, halfwidth); }).values);
      },
      py::arg("values"), py::arg("halfwidth") = 10);

  m.attr("__version__") = "0.1.0";
}
