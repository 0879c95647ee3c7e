#pragma once

// Ground-truth generators for the wave-shape oscillatory model and the
// amplitude/phase-modulated (phenomenological) model it generalizes.
//
// Time is in seconds. A wave-shape template s is supported on the unitless
// phase interval [-1/2, 1/2]; a cycle with amplitude a and frequency f is the
// function t -> a * s(f * t), which lives on |t| <= 1/(2f) seconds.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddmap/time_series.hpp"

namespace ddmap {

enum class TemplateKind { GaussBump, EcgLike, AbpLike, Db4Like, PvcLike };

/// Throws ConfigError("unknown template: <name>").
TemplateKind parse_template_kind(std::string_view name);
std::string_view to_string(TemplateKind kind);

/// Samples of a compactly supported C^2 cycle shape on a uniform grid over
/// [-1/2, 1/2] (endpoints included). Values at both endpoints are zero.
struct WaveShapeTemplate {
  std::string name;
  std::vector<double> grid;
  std::vector<double> values;

  /// Linear interpolation of the grid; exactly 0 outside [-1/2, 1/2].
  double operator()(double phase) const;
  /// 1-periodic extension of the template.
  double periodic(double phase) const;
  std::size_t resolution() const { return values.size(); }
  double step() const { return 1.0 / static_cast<double>(values.size() - 1); }
};

/// resolution >= 32, otherwise ConfigError("resolution too small").
WaveShapeTemplate make_template(TemplateKind kind, std::size_t resolution);
WaveShapeTemplate make_template(std::string_view name, std::size_t resolution);

/// The chart (a, f) -> a * s(f * t), evaluated on the template's own grid.
/// Requires a > 0 and f > 1 ("frequency outside chart domain").
std::vector<double> manifold_point(const WaveShapeTemplate& shape, double a, double f);
/// Same chart evaluated at arbitrary offsets t (seconds).
std::vector<double> manifold_point(const WaveShapeTemplate& shape, double a, double f,
                                   std::span<const double> t);

using ScalarFunction = std::function<double(double)>;

struct PhenomenologicalSpec {
  ScalarFunction amplitude;   // a(t) > 0
  ScalarFunction phase;       // phi(t), strictly increasing
  ScalarFunction phase_rate;  // optional phi'(t); central differences when empty
  ScalarFunction trend;       // optional T(t); zero when empty
  WaveShapeTemplate shape;
  double noise_std = 0.0;
  double fs = 100.0;
  double duration = 10.0;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
};

struct SlowVariationReport {
  double amplitude_ratio = 0.0;  // max |a'| / phi'
  double phase_ratio = 0.0;      // max |phi''| / phi'
  double epsilon = 0.0;
  bool pass = false;
};

/// Finite-difference check of |a'| <= eps phi' and |phi''| <= eps phi' on
/// the sample grid t_k = k / fs, k < floor(duration * fs).
SlowVariationReport slow_variation_check(const PhenomenologicalSpec& spec);

struct CycleParams {
  double amplitude = 1.0;
  double frequency = 1.0;
  int label = 0;
};

struct SyntheticDataset {
  TimeSeries signal;
  LandmarkSequence landmarks;           // true onsets, in samples
  std::vector<double> landmark_times;   // true onsets, in seconds, off the grid
  std::vector<CycleParams> cycles;      // one per landmark
  std::vector<double> amplitude_modulator;  // a(t) on the sample grid
  std::vector<double> frequency_modulator;  // phi'(t) on the sample grid
  std::vector<std::string> class_names;     // label -> template name
  double overlap_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// f(t) = a(t) s(phi(t)) + T(t) + noise, with landmarks at phi^{-1}(n).
/// Throws ConfigError when phi is not strictly increasing on the grid.
SyntheticDataset synth_phenomenological(const PhenomenologicalSpec& spec);

/// max_n sup_t |f_n(t) - g_n(t)| where f_n is the recorded cycle around
/// t_n = phi^{-1}(n) restricted to |t| <= 1/(2 phi'(t_n)), and g_n is the
/// constant-parameter cycle A(t_n) s(phi'(t_n) t). The trend is removed
/// before comparison; noise is not.
double max_constant_parameter_deviation(const PhenomenologicalSpec& spec,
                                        const SyntheticDataset& data);

struct GeneralizedSpec {
  ScalarFunction offset;                // A_0(t); zero when empty
  std::vector<ScalarFunction> amplitudes;  // A_1..A_K
  std::vector<ScalarFunction> phases;      // phi_1..phi_K
  double fs = 100.0;
  double duration = 10.0;
  double noise_std = 0.0;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
};

/// A_0(t) + sum_k A_k(t) cos(2 pi phi_k(t)) + noise. Emits a warning for
/// every k with max |phi_k' - k phi_1'| > eps phi_1'.
TimeSeries synth_generalized(const GeneralizedSpec& spec);

// ---------------------------------------------------------------------------
// Dynamics processes T emitting (s_j, t_j).

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CycleEvent {
  double time = 0.0;  // seconds
  double amplitude = 1.0;
  double frequency = 2.0;
  int label = 0;
};

/// Independent draws of (a, f), uniform on the box or on a grid_points^2 grid.
struct IidOnManifold {
  Interval amplitude{0.75, 1.25};
  Interval frequency{2.0, 9.0};
  std::size_t grid_points = 0;  // 0: continuous
  double mean_interval = 1.0;
  double interval_jitter = 0.0;  // relative, uniform in [-j, j]
  int label = 0;
};

/// Reflected Gaussian random walk of (a, f) inside the box.
struct RandomWalkOnParameters {
  Interval amplitude{0.75, 1.25};
  Interval frequency{1.5, 3.0};
  double start_amplitude = 1.0;
  double start_frequency = 2.0;
  double step_amplitude = 0.02;
  double step_frequency = 0.05;
  double mean_interval = 1.0;
  double interval_jitter = 0.0;
  int label = 0;
};

/// Sinusoidal amplitude modulation applied to every cycle.
struct AmplitudeModulation {
  double depth = 0.0;
  double frequency_hz = 0.25;
  double phase = 0.0;
};

/// Normal (label 0) and ectopic (label 1) beats from a two-state Markov
/// chain. Ectopic beats arrive early (prematurity * RR) and the following
/// normal beat after a compensatory pause.
struct TwoClassMarkov {
  double ectopic_fraction = 0.1;     // stationary probability of label 1
  double ectopic_persistence = 0.0;  // P(ectopic -> ectopic)
  double mean_interval = 0.8;
  double interval_jitter = 0.03;
  double prematurity = 0.65;
  double normal_amplitude = 1.0;
  double ectopic_amplitude = 1.0;
  double normal_frequency = 1.25;
  double ectopic_frequency = 1.25;
  AmplitudeModulation modulation;
};

struct Scripted {
  std::vector<CycleEvent> events;
};

struct DynamicsProcess {
  std::variant<IidOnManifold, RandomWalkOnParameters, TwoClassMarkov, Scripted> kind;
  std::uint64_t seed = 0;
  double start_time = 0.5;
};

/// Events with strictly increasing times in [start_time, duration).
std::vector<CycleEvent> generate_cycles(const DynamicsProcess& process, double duration);

/// Superposition of shifted cycles plus white Gaussian noise. Each cycle is
/// centred at its exact event time; the recorded landmark is the nearest
/// sample. Cycle j is label-indexed into template_bank.
SyntheticDataset synth_waveshape_model(const DynamicsProcess& process,
                                       std::span<const WaveShapeTemplate> template_bank,
                                       double noise_std, double fs, double duration);

/// Samples of a * s(f * (n - onset - offset) / fs) for the samples n inside the
/// cycle's support, returned together with the first sample index.
struct RenderedCycle {
  std::ptrdiff_t first = 0;
  std::vector<double> values;
};
RenderedCycle render_cycle(const WaveShapeTemplate& shape, double a, double f, double fs,
                           std::ptrdiff_t onset, double offset = 0.0);

// ---------------------------------------------------------------------------
// Named scenarios shared by the CLI, the Python module and the tests.

struct ScenarioOptions {
  double duration = 0.0;  // 0: scenario default
  double fs = 0.0;        // 0: scenario default
  double noise_std = -1;  // <0: scenario default
};

/// pvc10, ectopy10, ecg_am, ecg_plain, abp, manifold. Throws ConfigError("unknown
/// scenario: <name>").
SyntheticDataset make_scenario(std::string_view name, std::uint64_t seed,
                               const ScenarioOptions& options = {});
std::vector<std::string> scenario_names();

}  // namespace ddmap
