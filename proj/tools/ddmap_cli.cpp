// ddmap command-line front end.
//
//   ddmap synth   --scenario pvc10 --seed 7 --out data/
//   ddmap run     --mode ecg --input data/signal.csv --out run/
//   ddmap run     --manifest run/manifest.json --out run2/
//   ddmap inspect run/embedding.csv
//
// Exit codes: 0 success, 1 pipeline or data error, 2 usage or config error.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddmap/config_io.hpp"
#include "ddmap/diagnostics.hpp"
#include "ddmap/dynamics_recovery.hpp"
#include "ddmap/error.hpp"
#include "ddmap/io.hpp"
#include "ddmap/signal_synthesis.hpp"

namespace fs = std::filesystem;
using ddmap::Json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string sha256_file(const fs::path& path) {
  const std::string data = ddmap::io::read_text(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw ddmap::Error("sha256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DDMAP_OUT"); env && *env) return env;
  throw ddmap::ConfigError("no output directory: pass --out or set DDMAP_OUT");
}

Json read_json(const fs::path& path) {
  const std::string text = ddmap::io::read_text(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ddmap::ConfigError(path.string() + ": malformed JSON");
  return j;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string scenario;
  std::string spec;
  std::uint64_t seed = 0;
  std::string out;
  double duration = 0.0;
  double fs = 0.0;
  double noise = -1.0;
};

int cmd_synth(SynthArgs a) {
  if (!a.spec.empty()) {
    const Json spec = read_json(a.spec);
    if (!spec.is_object()) throw ddmap::ConfigError("spec file must hold an object");
    for (const auto& [k, v] : spec.items()) {
      try {
        if (k == "scenario") a.scenario = v.get<std::string>();
        else if (k == "seed") a.seed = v.get<std::uint64_t>();
        else if (k == "duration") a.duration = v.get<double>();
        else if (k == "fs") a.fs = v.get<double>();
        else if (k == "noise_std") a.noise = v.get<double>();
        else throw ddmap::ConfigError("unknown spec key: " + k);
      } catch (const nlohmann::json::exception&) {
        throw ddmap::ConfigError("spec key '" + k + "' has the wrong type");
      }
    }
  }
  if (a.scenario.empty()) throw ddmap::ConfigError("pass --scenario or --spec");
  const fs::path out = resolve_out(a.out);

  const auto data = ddmap::make_scenario(a.scenario, a.seed, {a.duration, a.fs, a.noise});
  ddmap::io::write_time_series_csv(out / "signal.csv", data.signal);
  ddmap::io::write_truth_csv(out / "truth.csv", data);

  Json side;
  side["generator"] = std::string("ddmap ") + kVersion;
  side["scenario"] = a.scenario;
  side["seed"] = a.seed;
  side["duration"] = a.duration;
  side["fs"] = data.signal.fs();
  side["noise_std"] = a.noise;
  side["samples"] = data.signal.size();
  side["cycles"] = data.cycles.size();
  side["class_names"] = data.class_names;
  side["overlap_fraction"] = data.overlap_fraction;
  ddmap::io::write_text(out / "dataset.json", side.dump(2) + "\n");
  std::cout << "wrote " << data.cycles.size() << " cycles, " << data.signal.size()
            << " samples to " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string mode;
  std::string input;
  std::string out;
  std::string config;
  std::string landmarks;
  std::string manifest;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  double fs = 0.0;
  bool record_timings = false;
};

int cmd_run(RunArgs a) {
  Json tree = Json::object();
  std::string input_digest;
  std::uint64_t seed = a.seed.value_or(0);

  if (!a.manifest.empty()) {
    const Json m = read_json(a.manifest);
    try {
      tree = m.at("config");
      if (a.input.empty()) a.input = m.at("input").at("path").get<std::string>();
      input_digest = m.at("input").at("sha256").get<std::string>();
      if (a.fs <= 0.0 && m.at("input").contains("fs_override"))
        a.fs = m.at("input").at("fs_override").get<double>();
      if (a.landmarks.empty() && m.contains("landmarks"))
        a.landmarks = m.at("landmarks").at("path").get<std::string>();
      if (!a.seed) seed = m.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ddmap::ConfigError(a.manifest + ": not a run manifest (" + e.what() + ")");
    }
  }
  if (!a.config.empty()) {
    const Json user = read_json(a.config);
    if (!user.is_object()) throw ddmap::ConfigError("config file must hold an object");
    tree.merge_patch(user);
  }
  if (!a.mode.empty()) tree["mode"] = a.mode;
  for (const auto& o : a.overrides) ddmap::apply_override(tree, o);
  if (!a.landmarks.empty()) tree["detector"]["mode"] = "external";

  ddmap::PipelineConfig config = ddmap::config_from_json(tree);
  if (a.input.empty()) throw ddmap::ConfigError("pass --input or --manifest");
  if (!fs::exists(a.input)) throw ddmap::ConfigError("input file not found: " + a.input);
  const std::string digest = sha256_file(a.input);
  if (!input_digest.empty() && digest != input_digest)
    throw ddmap::ConfigError("input digest does not match the manifest");
  const fs::path out = resolve_out(a.out);

  const auto x = ddmap::io::read_time_series_csv(a.input, a.fs);
  if (!a.landmarks.empty()) config.detector.external = ddmap::io::read_landmarks_csv(a.landmarks);

  const auto t_start = std::chrono::steady_clock::now();
  auto result = ddmap::ddmap(x, config);
  const auto t_embed = std::chrono::steady_clock::now();
  const std::size_t d = config.kernel.dim;

  ddmap::io::write_embedding_csv(out / "embedding.csv", result.embedding, result.landmarks);
  ddmap::io::write_eigenvalues_json(out / "eigenvalues.json", result.embedding, d);
  std::vector<std::string> outputs{"embedding.csv", "eigenvalues.json"};

  const bool ecg = config.mode == ddmap::PipelineMode::Ecg;
  const auto landmarks = result.landmarks;
  if (ecg) {
    const auto edr = ddmap::derive_edr_from(std::move(result), config, x.duration());
    ddmap::io::write_trace_csv(out / "u_trace.csv", edr.u);
    ddmap::io::write_clusters_csv(out / "clusters.csv", edr.u, edr.clusters, landmarks);
    ddmap::io::write_trace_csv(out / "edr.csv", edr.normalized);
    outputs.insert(outputs.end(), {"u_trace.csv", "clusters.csv", "edr.csv"});
  } else {
    auto u = ddmap::compress_svd(result.embedding.coords, landmarks);
    const auto clusters = ddmap::sign_cluster(u.values);
    u.labels = clusters.labels;
    ddmap::io::write_trace_csv(out / "u_trace.csv", u);
    ddmap::io::write_clusters_csv(out / "clusters.csv", u, clusters, landmarks);
    outputs.insert(outputs.end(), {"u_trace.csv", "clusters.csv"});
  }
  const auto t_end = std::chrono::steady_clock::now();

  Json manifest;
  manifest["tool"] = "ddmap";
  manifest["version"] = kVersion;
  manifest["command"] = "run";
  manifest["seed"] = seed;
  manifest["input"] = {{"path", a.input}, {"sha256", digest}};
  if (a.fs > 0.0) manifest["input"]["fs_override"] = a.fs;
  manifest["input"]["fs"] = x.fs();
  manifest["input"]["samples"] = x.size();
  if (!a.landmarks.empty())
    manifest["landmarks"] = {{"path", a.landmarks}, {"sha256", sha256_file(a.landmarks)}};
  manifest["config"] = ddmap::config_to_json(config);
  manifest["cycles"] = landmarks.size();
  manifest["outputs"] = outputs;
  if (a.record_timings) {
    using secs = std::chrono::duration<double>;
    manifest["timings_s"] = {{"embedding", secs(t_embed - t_start).count()},
                             {"analysis", secs(t_end - t_embed).count()}};
  }
  ddmap::io::write_text(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "embedded " << landmarks.size() << " cycles into " << d << " dimensions; outputs in "
            << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_inspect(const std::string& target) {
  fs::path emb_path = target;
  if (fs::is_directory(emb_path)) emb_path /= "embedding.csv";
  if (!fs::exists(emb_path)) throw ddmap::ConfigError("no such file: " + emb_path.string());
  const auto table = ddmap::io::read_embedding_csv(emb_path);
  const auto eig_path = emb_path.parent_path() / "eigenvalues.json";
  if (!fs::exists(eig_path))
    throw ddmap::ConfigError("missing eigenvalues.json next to " + emb_path.string());
  const Json eig = read_json(eig_path);
  std::vector<double> lambda;
  try {
    lambda = eig.at("lambda").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw ddmap::ConfigError(eig_path.string() + ": no lambda array");
  }
  const auto d = static_cast<std::size_t>(table.coords.cols());
  if (lambda.size() != d)
    throw ddmap::ConfigError("eigenvalue count " + std::to_string(lambda.size()) +
                             " does not match " + std::to_string(d) + " embedding columns");

  std::cout << "points: " << table.coords.rows() << "\n";
  std::cout << "dimensions: " << d << "\n";
  std::cout << "eigenvalues:\n";
  for (std::size_t k = 0; k < d; ++k)
    std::cout << "  lambda_" << k + 2 << " = " << ddmap::io::format_double(lambda[k]) << "\n";
  if (d >= 2)
    std::cout << "spectral gap (lambda_2 - lambda_3): "
              << ddmap::io::format_double(lambda[0] - lambda[1]) << "\n";
  std::cout << "coordinate RMS:\n";
  for (std::size_t k = 0; k < d; ++k) {
    const double rms = std::sqrt(table.coords.col(static_cast<Eigen::Index>(k)).squaredNorm() /
                                 static_cast<double>(table.coords.rows()));
    std::cout << "  coord_" << k + 1 << " = " << ddmap::io::format_double(rms) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-shape manifold analysis with diffusion maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic dataset with ground truth");
  s->add_option("--scenario", synth.scenario, "Scenario name");
  s->add_option("--spec", synth.spec, "JSON file with scenario, seed, duration, fs, noise_std");
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--out", synth.out, "Output directory (default $DDMAP_OUT)");
  s->add_option("--duration", synth.duration, "Duration in seconds (0: scenario default)");
  s->add_option("--fs", synth.fs, "Sampling rate in Hz (0: scenario default)");
  s->add_option("--noise", synth.noise, "Noise std (negative: scenario default)");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run the DDmap pipeline on a signal");
  r->add_option("--mode", run.mode, "ecg, abp or custom");
  r->add_option("--input", run.input, "Signal CSV (time,value)");
  r->add_option("--out", run.out, "Output directory (default $DDMAP_OUT)");
  r->add_option("--config", run.config, "JSON configuration tree");
  r->add_option("--set", run.overrides, "Override a config key, e.g. kernel.alpha=0.5");
  r->add_option("--landmarks", run.landmarks, "CSV of external landmark samples");
  r->add_option("--manifest", run.manifest, "Reproduce the run recorded in this manifest");
  r->add_option("--seed", run.seed, "Seed recorded in the manifest");
  r->add_option("--fs", run.fs, "Sampling rate override in Hz");
  r->add_flag("--record-timings", run.record_timings, "Store stage timings in the manifest");

  std::string inspect_target;
  auto* in = app.add_subcommand("inspect", "Summarize an embedding");
  in->add_option("embedding", inspect_target, "embedding.csv or a run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (s->parsed()) return cmd_synth(synth);
    if (r->parsed()) return cmd_run(run);
    if (in->parsed()) return cmd_inspect(inspect_target);
  } catch (const ddmap::ConfigError& e) {
    std::cerr << "ddmap: " << e.what() << "\n";
    return 2;
  } catch (const ddmap::Error& e) {
    std::cerr << "ddmap: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "ddmap: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ddmap: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
