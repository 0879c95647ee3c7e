#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>

#include "ddmap/config_io.hpp"
#include "ddmap/error.hpp"
#include "ddmap/io.hpp"

using namespace ddmap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ddmap_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(0.25) == "0.25");
  CHECK(std::strtod(io::format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("time series CSV round trip") {
  std::vector<double> v(300);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(0.37 * static_cast<double>(k)) / 3.0;
  const TimeSeries x(v, 250.0);
  const auto path = scratch("signal.csv");
  io::write_time_series_csv(path, x);
  const auto y = io::read_time_series_csv(path);
  CHECK(y.fs() == doctest::Approx(250.0).epsilon(1e-12));
  CHECK(y.values() == x.values());
  CHECK(io::read_time_series_csv(path, 100.0).fs() == 100.0);
}

TEST_CASE("CSV errors are usage errors") {
  CHECK_THROWS_AS(io::read_time_series_csv(scratch("missing.csv")), ConfigError);
  const auto bad = scratch("bad.csv");
  io::write_text(bad, "time,value\n0,1\n0.01,abc\n");
  CHECK_THROWS_WITH_AS(io::read_time_series_csv(bad), doctest::Contains("not a number"), ConfigError);
  const auto empty = scratch("empty.csv");
  io::write_text(empty, "");
  CHECK_THROWS_AS(io::read_time_series_csv(empty), ConfigError);
  const auto lm = scratch("landmarks.csv");
  io::write_text(lm, "sample\n10\n20.5\n");
  CHECK_THROWS_AS(io::read_landmarks_csv(lm), ConfigError);
  io::write_text(lm, "sample\n10\n20\n");
  CHECK(io::read_landmarks_csv(lm) == std::vector<std::size_t>{10, 20});
}

TEST_CASE("embedding CSV round trip") {
  DiffusionEmbedding emb;
  emb.coords.resize(3, 2);
  emb.coords << 0.1, -0.2, 1.0 / 3.0, 0.0, -7.5e-9, 2.0;
  const LandmarkSequence lm({10, 250, 490}, 100.0);
  const auto path = scratch("embedding.csv");
  io::write_embedding_csv(path, emb, lm);
  const auto t = io::read_embedding_csv(path);
  CHECK(t.landmarks == lm.indices());
  CHECK(t.times == std::vector<double>{0.1, 2.5, 4.9});
  CHECK(t.coords == emb.coords);
}

TEST_CASE("config JSON round trip for every preset") {
  for (const auto& preset : {PipelineConfig::ecg(), PipelineConfig::abp(), PipelineConfig{}}) {
    const Json j = config_to_json(preset);
    const Json k = config_to_json(config_from_json(j));
    CHECK(j.dump() == k.dump());
  }
}

TEST_CASE("config parsing starts from the named preset") {
  const auto c = config_from_json(Json::parse(R"({"mode": "abp", "kernel": {"alpha": 0.5}})"));
  CHECK(c.mode == PipelineMode::Abp);
  CHECK(c.kernel.alpha == 0.5);
  CHECK(c.kernel.dim == 3);
  CHECK(c.upsample_fs == 2000.0);
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_THROWS_WITH_AS(config_from_json(Json::parse(R"({"kernel": {"alpah": 1}})")),
                       doctest::Contains("unknown config key: kernel.alpah"), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"kernel": {"alpha": "one"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"kernel": {"alpha": 2}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"mode": "eeg"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"kernel": {"bandwidth": {"rule": "silverman"}}})")),
                  ConfigError);
}

TEST_CASE("dotted overrides") {
  Json tree = Json::object();
  apply_override(tree, "kernel.alpha=0.5");
  apply_override(tree, "kernel.bandwidth={\"rule\":\"knn_percentile\",\"k\":8,\"percentile\":25}");
  apply_override(tree, "mode=ecg");
  const auto c = config_from_json(tree);
  CHECK(c.mode == PipelineMode::Ecg);
  CHECK(c.kernel.alpha == 0.5);
  const auto& knn = std::get<KnnPercentile>(c.kernel.bandwidth);
  CHECK(knn.k == 8);
  CHECK_THROWS_AS(apply_override(tree, "kernel.alpha"), ConfigError);
  CHECK_THROWS_AS(apply_override(tree, "kernel..alpha=1"), ConfigError);
}

TEST_CASE("bandwidth rules round trip") {
  for (const BandwidthRule& r : {BandwidthRule{QuartileAllPairs{false}}, BandwidthRule{KnnPercentile{12, 30.0}},
                                 BandwidthRule{ExplicitBandwidth{0.125}}}) {
    CHECK(bandwidth_to_json(bandwidth_from_json(bandwidth_to_json(r))).dump() == bandwidth_to_json(r).dump());
  }
}
