#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ddmap/diagnostics.hpp"
#include "ddmap/dynamics_recovery.hpp"
#include "ddmap/error.hpp"
#include "ddmap/signal_synthesis.hpp"
#include "ddmap/spline.hpp"
#include "support/oracles.hpp"

using namespace ddmap;
using std::numbers::pi;

namespace {

std::vector<double> grid(double t0, double step, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = t0 + step * static_cast<double>(k);
  return t;
}

LandmarkSequence landmarks_at(std::size_t n, double fs) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = 100 * (i + 1);
  return LandmarkSequence(idx, fs);
}

double accuracy(const SyntheticDataset& d, const EdrResult& r) {
  // Detected landmarks are matched to the nearest true one.
  const auto near = oracle::nearest(r.ddmap.landmarks.indices(), d.landmarks.indices());
  std::size_t right = 0;
  for (std::size_t i = 0; i < near.size(); ++i)
    right += r.clusters.labels[i] == d.cycles[near[i]].label;
  return static_cast<double>(right) / static_cast<double>(near.size());
}

}  // namespace

TEST_CASE("top singular vector of a rank-one matrix") {
  RowMatrix E(4, 3);
  const double u[] = {1.0, -2.0, 0.5, 3.0};
  const double v[] = {0.3, 0.1, -0.7};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) E(i, j) = u[i] * v[j];
  const auto s = top_left_singular_vector(E);
  const double n = std::sqrt(1.0 + 4.0 + 0.25 + 9.0);
  for (int i = 0; i < 4; ++i) CHECK(s(i) == doctest::Approx(u[i] / n));
  CHECK_THROWS_AS(top_left_singular_vector(RowMatrix::Zero(3, 2)), Error);
}

TEST_CASE("top singular vector against a hand-computed 3 x 2 case") {
  RowMatrix E(3, 2);
  E << 2.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  const auto s = top_left_singular_vector(E);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(std::abs(s(1)) <= 1e-14);
  // E E^T has eigenvalues 4 and 1; the top vector of [[1,1],[1,1],[0,0]]-type
  // matrices is (1,1,0)/sqrt2.
  RowMatrix F(3, 2);
  F << 1.0, 1.0, 1.0, 1.0, 0.0, 0.0;
  const auto f = top_left_singular_vector(F);
  CHECK(f(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(f(1) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("top singular vector does not depend on the sign of the input") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  RowMatrix E(20, 4);
  for (Eigen::Index i = 0; i < E.size(); ++i) E.data()[i] = g(rng);
  const auto a = top_left_singular_vector(E);
  const auto b = top_left_singular_vector(RowMatrix(-E));
  CHECK((a - b).norm() <= 1e-12);
  CHECK(a.norm() == doctest::Approx(1.0));
}

TEST_CASE("compress_svd puts U at the landmark times") {
  RowMatrix E(5, 2);
  E << 1, 0, 2, 0, 3, 0, 4, 0, 5, 0;
  const auto t = compress_svd(E, landmarks_at(5, 100.0));
  CHECK(t.times == std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(t.values[4] > 0.0);
  CHECK_THROWS_AS(compress_svd(E, landmarks_at(4, 100.0)), ConfigError);
}

TEST_CASE("sign clustering") {
  SUBCASE("minority is ectopic") {
    const std::vector<double> u{-0.1, -0.2, 0.5, -0.3, -0.1};
    const auto c = sign_cluster(u);
    CHECK(c.c1 == std::vector<std::size_t>{2});
    CHECK(c.c1_is_ectopic);
    CHECK(c.labels == std::vector<int>{0, 0, 1, 0, 0});
  }
  SUBCASE("zero goes to C1") {
    const std::vector<double> u{0.0, -1.0, -1.0};
    CHECK(sign_cluster(u).c1 == std::vector<std::size_t>{0});
  }
  SUBCASE("tie declares C1 ectopic with a warning") {
    WarningCapture w;
    const auto c = sign_cluster(std::vector<double>{1.0, -1.0});
    CHECK(c.ectopic == std::vector<std::size_t>{0});
    CHECK(w.contains("equal size"));
  }
  SUBCASE("one side empty") {
    WarningCapture w;
    const auto c = sign_cluster(std::vector<double>{0.2, 0.1, 0.3});
    CHECK(c.ectopic.empty());
    CHECK(c.normal.size() == 3);
    CHECK(w.contains("single morphology class"));
  }
  SUBCASE("flipping every sign keeps the partition") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(-0.5, 1.0);
    std::vector<double> u(101), v(101);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = g(rng);
      v[i] = -u[i];
    }
    CHECK(sign_cluster(u).labels == sign_cluster(v).labels);
  }
}

TEST_CASE("natural spline") {
  SUBCASE("reproduces a line exactly") {
    const NaturalCubicSpline s({0.0, 1.0, 2.5, 4.0}, {1.0, 3.0, 6.0, 9.0});
    for (double t : {0.3, 1.7, 3.9}) CHECK(s(t) == doctest::Approx(1.0 + 2.0 * t));
  }
  SUBCASE("fits a sampled sinusoid from irregular knots") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    std::vector<double> t, y;
    for (int k = 0; k <= 60; ++k) {
      t.push_back(0.5 * k + jitter(rng));
      y.push_back(std::sin(2.0 * pi * 0.1 * t.back()));
    }
    const auto tr = interpolate_trace(t, y, 4.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      worst = std::max(worst, std::abs(tr.values[k] - std::sin(2.0 * pi * 0.1 * tr.times[k])));
    CHECK(worst <= 0.02);
  }
  SUBCASE("knot checks") {
    CHECK_THROWS_AS(NaturalCubicSpline({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}), ConfigError);
    CHECK_THROWS_AS(interpolate_trace(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 2}), ConfigError);
  }
}

TEST_CASE("interpolated trace grid") {
  const auto t = grid(0.4, 0.8, 20);  // span 15.2 s
  std::vector<double> v(20, 2.0);
  const auto tr = interpolate_trace(t, v, 4.0);
  REQUIRE(tr.times.size() == 61);
  CHECK(tr.times.front() == 0.4);
  CHECK(tr.times[1] - tr.times[0] == doctest::Approx(0.25));
  for (double x : tr.values) CHECK(x == doctest::Approx(2.0));
  CHECK(interpolate_trace(t, v, 4.0, 10.0).times.size() == 40);
}

TEST_CASE("interpolation of a cubic is exact away from the ends") {
  // The natural end condition bends the ends; the interior converges fast.
  const auto t = grid(0.0, 0.1, 101);
  std::vector<double> y;
  for (double x : t) y.push_back(x * x * x - 2.0 * x);
  const auto tr = interpolate_trace(t, y, 40.0);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double x = tr.times[k];
    if (x < 1.0 || x > 9.0) continue;
    CHECK(std::abs(tr.values[k] - (x * x * x - 2.0 * x)) <= 1e-3);
  }
}

TEST_CASE("sliding normalization") {
  SUBCASE("sinusoid over whole periods") {
    DynamicsTrace v;
    v.times = grid(0.0, 0.25, 400);
    for (double t : v.times) v.values.push_back(3.0 + 2.0 * std::sin(2.0 * pi * 0.2 * t));
    // 21 samples at 4 Hz is 5.25 s, a little over one period.
    const auto n = sliding_normalize(v, 10);
    const auto mid = std::span(n.values).subspan(10, 380);
    CHECK(std::abs(oracle::mean(mid)) <= 0.1);
    CHECK(*std::max_element(mid.begin(), mid.end()) == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
  }
  SUBCASE("constant trace maps to zero with a warning") {
    DynamicsTrace v;
    v.times = grid(0.0, 0.25, 30);
    v.values.assign(30, 4.0);
    WarningCapture w;
    const auto n = sliding_normalize(v, 10);
    for (double x : n.values) CHECK(x == 0.0);
    CHECK(w.contains("zero local spread"));
  }
  SUBCASE("ramp by hand") {
    DynamicsTrace v;
    v.times = grid(0.0, 1.0, 7);
    v.values = {0, 1, 2, 3, 4, 5, 6};
    const auto n = sliding_normalize(v, 1);
    // Interior windows {k-1, k, k+1}: mean k, RMS deviation sqrt(2/3).
    for (std::size_t i = 1; i < 6; ++i) CHECK(n.values[i] == doctest::Approx(0.0));
    // Edge window {0, 1}: mean 0.5, RMS deviation 0.5.
    CHECK(n.values[0] == doctest::Approx(-1.0));
    CHECK(n.values[6] == doctest::Approx(1.0));
  }
  SUBCASE("invariant to positive affine maps") {
    DynamicsTrace v, w;
    v.times = w.times = grid(0.0, 0.25, 60);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < 60; ++i) {
      v.values.push_back(g(rng));
      w.values.push_back(5.0 * v.values.back() - 12.0);
    }
    const auto a = sliding_normalize(v, 10), b = sliding_normalize(w, 10);
    for (std::size_t i = 0; i < 60; ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]));
  }
  SUBCASE("too short") {
    DynamicsTrace v;
    v.times = grid(0.0, 1.0, 5);
    v.values.assign(5, 1.0);
    CHECK_THROWS_AS(sliding_normalize(v, 10), ConfigError);
  }
}

TEST_CASE("amplitude-modulated ECG gives a respiratory-rate trace") {
  const auto d = make_scenario("ecg_am", 4);
  const auto r = derive_edr(d.signal, PipelineConfig::ecg());
  const auto spec = oracle::welch(r.normalized.values, 4.0, 256);
  CHECK(std::abs(spec.peak_frequency(0.05, 1.0) - 0.25) <= 0.02);
}

TEST_CASE("ECG with ectopic beats separates the classes and keeps the modulation") {
  const auto d = make_scenario("pvc10", 6);
  const auto r = derive_edr(d.signal, PipelineConfig::ecg());
  CHECK(accuracy(d, r) >= 0.99);
  const auto spec = oracle::welch(r.normalized.values, 4.0, 256);
  CHECK(std::abs(spec.peak_frequency(0.05, 1.0) - 0.25) <= 0.02);
  std::vector<double> truth;
  const double fs = d.signal.fs();
  for (double t : r.normalized.times) {
    const double pos = t * fs;
    const auto k = std::min(static_cast<std::size_t>(pos), d.amplitude_modulator.size() - 2);
    const double w = pos - static_cast<double>(k);
    truth.push_back((1.0 - w) * d.amplitude_modulator[k] + w * d.amplitude_modulator[k + 1]);
  }
  CHECK(std::abs(oracle::pearson(r.normalized.values, truth)) >= 0.8);
}

TEST_CASE("unmodulated ECG has no dominant respiratory peak") {
  const auto d = make_scenario("ecg_plain", 8);
  const auto r = derive_edr(d.signal, PipelineConfig::ecg());
  CHECK(oracle::welch(r.normalized.values, 4.0, 256).peak_to_median(0.1, 0.5) <= 3.0);
}

TEST_CASE("ectopic morphology opens a spectral gap") {
  const auto d = make_scenario("ectopy10", 1);
  const auto r = ddmap::ddmap(d.signal, PipelineConfig::ecg());
  CHECK(r.embedding.eigenvalues(0) - r.embedding.eigenvalues(1) >= 0.1);
}

TEST_CASE("identical cycles collapse to the origin") {
  Scripted s;
  for (int k = 1; k <= 40; ++k) s.events.push_back({static_cast<double>(k), 1.0, 1.25, 0});
  const WaveShapeTemplate bank[] = {make_template(TemplateKind::EcgLike, 1025)};
  const auto d = synth_waveshape_model({s, 0, 0.5}, bank, 0.0, 250.0, 42.0);
  PipelineConfig cfg;  // no conditioning, so every excised cycle is the same
  cfg.kernel.dim = 4;
  WarningCapture w;
  const auto r = ddmap::ddmap(d.signal, cfg);
  REQUIRE(r.cycles.count() == 40);
  CHECK(w.contains("all cycles are identical"));
  const double cycle_norm = r.cycles.rows.row(0).norm();
  const auto& c = r.embedding.coords;
  CHECK(oracle::rms(std::span(c.data(), static_cast<std::size_t>(c.size()))) <= 1e-6 * cycle_norm);
}

TEST_CASE("too few cycles for the embedding dimension") {
  const auto d = make_scenario("ecg_plain", 1, ScenarioOptions{9.0, 0.0, -1.0});
  CHECK_THROWS_WITH_AS(ddmap::ddmap(d.signal, PipelineConfig::ecg()), doctest::Contains("is not more than d = 32"), Error);
}

TEST_CASE("pipeline presets") {
  const auto e = PipelineConfig::ecg();
  CHECK(e.lowpass);
  CHECK(e.baseline_removal);
  CHECK(e.kernel.dim == 32);
  CHECK(e.kernel.diffusion_time == 10.0);
  const auto a = PipelineConfig::abp();
  CHECK(a.upsample_fs == 2000.0);
  CHECK(a.window == WindowMode::MinInterval);
  CHECK(a.normalize);
  CHECK(a.kernel.dim == 3);
  CHECK(std::holds_alternative<KnnPercentile>(a.kernel.bandwidth));
  CHECK(parse_pipeline_mode("abp") == PipelineMode::Abp);
  CHECK_THROWS_AS(parse_pipeline_mode("eeg"), ConfigError);
}
