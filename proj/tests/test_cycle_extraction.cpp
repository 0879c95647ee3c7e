#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddmap/cycle_extraction.hpp"
#include "ddmap/diagnostics.hpp"
#include "ddmap/error.hpp"
#include "ddmap/signal_synthesis.hpp"
#include "support/oracles.hpp"

using namespace ddmap;
using std::numbers::pi;

namespace {

SyntheticDataset ecg_train(double noise, std::uint64_t seed, double fs = 250.0, double seconds = 120.0) {
  TwoClassMarkov p;
  p.ectopic_fraction = 0.0;
  const WaveShapeTemplate bank[] = {make_template(TemplateKind::EcgLike, 1025)};
  return synth_waveshape_model({p, seed, 0.5}, bank, noise, fs, seconds);
}

// Pulse train with one broad positive lobe per second.
TimeSeries pulse_train(double fs, double seconds, std::vector<std::size_t>* onsets = nullptr) {
  std::vector<double> x(static_cast<std::size_t>(fs * seconds), 0.0);
  for (std::size_t c = 0; c + 1 < static_cast<std::size_t>(seconds); ++c) {
    const std::size_t start = static_cast<std::size_t>(fs) * c + static_cast<std::size_t>(fs / 10);
    if (onsets) onsets->push_back(start);
    for (std::size_t k = 0; k < static_cast<std::size_t>(0.6 * fs); ++k)
      x[start + k] = std::sin(pi * static_cast<double>(k) / (0.6 * fs));
  }
  return TimeSeries(std::move(x), fs);
}

}  // namespace

TEST_CASE("peak detection on a noiseless train lands within one sample") {
  const auto d = ecg_train(0.0, 2);
  const auto lm = detect_landmarks(d.signal);
  const auto& truth = d.landmarks.indices();
  CHECK(lm.size() == truth.size());
  CHECK(oracle::matched(lm.indices(), truth, 1) == truth.size());
}

TEST_CASE("peak detection on a noisy train") {
  const auto d = ecg_train(0.05, 3);
  const auto lm = detect_landmarks(d.signal);
  const auto& truth = d.landmarks.indices();
  const std::size_t tol = static_cast<std::size_t>(0.030 * d.signal.fs());
  const double hits = static_cast<double>(oracle::matched(lm.indices(), truth, tol));
  CHECK(hits / static_cast<double>(truth.size()) >= 0.99);
  CHECK(hits / static_cast<double>(lm.size()) >= 0.99);
  for (std::size_t i = 1; i < lm.size(); ++i)
    CHECK(lm[i] - lm[i - 1] >= static_cast<std::size_t>(0.25 * d.signal.fs()));
}

TEST_CASE("steepest-ascent landmarks sit on the upstroke") {
  std::vector<std::size_t> onsets;
  const auto x = pulse_train(500.0, 20.0, &onsets);
  DetectorConfig cfg;
  cfg.mode = LandmarkMode::DerivativeMax;
  const auto lm = detect_landmarks(x, cfg);
  REQUIRE(lm.size() == onsets.size());
  // A half-sine rises fastest at its start.
  CHECK(oracle::matched(lm.indices(), onsets, 2) == onsets.size());
}

TEST_CASE("external landmarks are taken as given") {
  const auto x = pulse_train(100.0, 10.0);
  DetectorConfig cfg;
  cfg.mode = LandmarkMode::External;
  cfg.external = {15, 115, 215};
  CHECK(detect_landmarks(x, cfg).indices() == cfg.external);
}

TEST_CASE("flat signal has no cycles") {
  const TimeSeries x(std::vector<double>(2000, 1.0), 250.0);
  CHECK_THROWS_WITH_AS(detect_landmarks(x), "no cycles detected", Error);
}

TEST_CASE("pulse rejection keeps clean pulses and drops multi-bump ones") {
  std::vector<std::size_t> onsets;
  const auto clean = pulse_train(500.0, 30.0, &onsets);
  const LandmarkSequence lm(onsets, 500.0);
  CHECK(reject_bad_pulses(clean, lm).size() == lm.size());

  // Superimpose five extra bumps on five pulses, giving each five wide maxima.
  auto v = clean.values();
  const std::size_t hit[] = {3, 8, 13, 18, 23};
  for (std::size_t c : hit)
    for (std::size_t b = 0; b < 5; ++b) {
      const std::size_t centre = onsets[c] + 60 + 90 * b;
      for (std::ptrdiff_t k = -45; k <= 45; ++k) {
        const double u = static_cast<double>(k) / 15.0;
        v[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(centre) + k)] += 1.5 * std::exp(-0.5 * u * u);
      }
    }
  const TimeSeries dirty(v, 500.0);
  const auto kept = reject_bad_pulses(dirty, lm);
  CHECK(kept.size() == lm.size() - 5);
  for (std::size_t c : hit)
    CHECK(std::find(kept.indices().begin(), kept.indices().end(), onsets[c]) == kept.indices().end());

  RejectionConfig strict;
  strict.max_wide_maxima = 0;
  CHECK_THROWS_WITH_AS(reject_bad_pulses(clean, lm, strict), "all pulses rejected", Error);
}

TEST_CASE("fixed window excision") {
  std::vector<double> v(1000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k);
  const TimeSeries x(v, 200.0);
  const LandmarkSequence lm({100, 400, 700}, 200.0);
  const auto X = excise_cycles(x, lm, 80.0, 400.0);
  CHECK(X.left_samples == 16);
  CHECK(X.right_samples == 80);
  REQUIRE(X.length() == 97);
  REQUIRE(X.count() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 97; ++j) CHECK(X.rows(i, j) == static_cast<double>(lm[i] - 16 + j));

  const auto one = excise_cycles(x, LandmarkSequence({500}, 200.0), 80.0, 400.0);
  CHECK(one.count() == 1);
  CHECK(one.rows(0, 16) == 500.0);
}

TEST_CASE("windows leaving the signal are dropped with a warning") {
  const TimeSeries x(std::vector<double>(1000, 0.5), 200.0);
  const LandmarkSequence lm({5, 400, 990}, 200.0);
  WarningCapture w;
  const auto X = excise_cycles(x, lm);
  CHECK(X.count() == 1);
  CHECK(X.landmark_indices == std::vector<std::size_t>{400});
  CHECK(w.contains("2 landmark(s) dropped"));
  CHECK_THROWS_AS(excise_cycles(x, LandmarkSequence({2, 998}, 200.0)), Error);
}

TEST_CASE("shortest-interval window") {
  std::vector<double> v(3000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(static_cast<double>(k) / 7.0);
  const TimeSeries x(v, 1000.0);
  const LandmarkSequence lm({200, 900, 1500, 2300}, 1000.0);
  const auto X = excise_cycles_min_interval(x, lm, 80.0);
  CHECK(X.left_samples == 80);
  CHECK(X.length() == 601);
  CHECK(X.right_samples == 520);
}

TEST_CASE("z-normalization") {
  CycleMatrix X;
  X.rows.resize(1, 3);
  X.rows << 1.0, 2.0, 3.0;
  const auto Z = normalize_cycles(X);
  const double s = std::sqrt(1.5);
  CHECK(Z.rows(0, 0) == doctest::Approx(-s));
  CHECK(Z.rows(0, 1) == doctest::Approx(0.0));
  CHECK(Z.rows(0, 2) == doctest::Approx(s));
  CHECK(Z.normalized);

  const auto ZZ = normalize_cycles(Z);
  CHECK((ZZ.rows - Z.rows).cwiseAbs().maxCoeff() <= 1e-12);

  const auto S = normalize_cycles(X, StdConvention::Sample);
  CHECK(S.rows(0, 2) == doctest::Approx(1.0));

  CycleMatrix flat;
  flat.rows = RowMatrix::Constant(2, 4, 3.0);
  CHECK_THROWS_WITH_AS(normalize_cycles(flat), doctest::Contains("degenerate cycle"), Error);
}

TEST_CASE("z-normalization is invariant to positive affine maps of each row") {
  const auto d = ecg_train(0.01, 5, 250.0, 30.0);
  const auto X = excise_cycles(d.signal, d.landmarks);
  CycleMatrix Y = X;
  for (Eigen::Index i = 0; i < Y.rows.rows(); ++i)
    Y.rows.row(i) = Y.rows.row(i) * (2.0 + static_cast<double>(i)) + RowMatrix::Constant(1, Y.rows.cols(), -7.0 * static_cast<double>(i));
  CHECK((normalize_cycles(X).rows - normalize_cycles(Y).rows).cwiseAbs().maxCoeff() <= 1e-9);
}
