#include <cmath>
#include <numbers>
#include <string>

#include "ddmap/error.hpp"
#include "ddmap/signal_synthesis.hpp"

namespace ddmap {
namespace {

constexpr std::size_t kResolution = 1025;

double pick(double override_value, double fallback) {
  return override_value > 0.0 ? override_value : fallback;
}

TwoClassMarkov ecg_rhythm(double ectopic_fraction, double am_depth) {
  TwoClassMarkov p;
  p.ectopic_fraction = ectopic_fraction;
  p.mean_interval = 0.8;
  p.interval_jitter = 0.03;
  p.prematurity = 0.65;
  p.normal_frequency = 1.25;
  p.ectopic_frequency = 1.25;
  p.modulation = {am_depth, 0.25, 0.0};
  return p;
}

SyntheticDataset ecg(std::uint64_t seed, const ScenarioOptions& opt, double ectopic_fraction,
                     double am_depth, double default_duration) {
  const WaveShapeTemplate bank[] = {make_template(TemplateKind::EcgLike, kResolution),
                                    make_template(TemplateKind::PvcLike, kResolution)};
  DynamicsProcess process{ecg_rhythm(ectopic_fraction, am_depth), seed, 0.5};
  const double noise = opt.noise_std >= 0.0 ? opt.noise_std : 0.02;
  return synth_waveshape_model(process, bank, noise, pick(opt.fs, 500.0),
                               pick(opt.duration, default_duration));
}

SyntheticDataset abp(std::uint64_t seed, const ScenarioOptions& opt) {
  const WaveShapeTemplate bank[] = {make_template(TemplateKind::AbpLike, kResolution)};
  RandomWalkOnParameters walk;
  walk.amplitude = {0.8, 1.2};
  walk.frequency = {1.3, 1.6};
  walk.start_amplitude = 1.0;
  walk.start_frequency = 1.45;
  walk.step_amplitude = 0.02;
  walk.step_frequency = 0.01;
  walk.mean_interval = 0.8;
  walk.interval_jitter = 0.03;
  DynamicsProcess process{walk, seed, 0.5};
  const double noise = opt.noise_std >= 0.0 ? opt.noise_std : 0.01;
  auto data = synth_waveshape_model(process, bank, noise, pick(opt.fs, 125.0),
                                    pick(opt.duration, 300.0));
  // Slow mean-pressure drift on top of the pulses.
  auto samples = data.signal.values();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double t = data.signal.time_at(k);
    samples[k] += 0.5 * std::sin(2.0 * std::numbers::pi * t / 60.0);
  }
  data.signal = data.signal.with_samples(std::move(samples));
  return data;
}

SyntheticDataset manifold(std::uint64_t seed, const ScenarioOptions& opt) {
  const WaveShapeTemplate bank[] = {make_template(TemplateKind::Db4Like, kResolution)};
  IidOnManifold iid;
  iid.grid_points = 30;
  iid.mean_interval = 1.0;
  DynamicsProcess process{iid, seed, 0.5};
  const double noise = opt.noise_std >= 0.0 ? opt.noise_std : 0.0;
  return synth_waveshape_model(process, bank, noise, pick(opt.fs, 500.0),
                               pick(opt.duration, 600.0));
}

}  // namespace

SyntheticDataset make_scenario(std::string_view name, std::uint64_t seed,
                               const ScenarioOptions& options) {
  if (name == "pvc10") return ecg(seed, options, 0.10, 0.15, 900.0);
  if (name == "ectopy10") return ecg(seed, options, 0.10, 0.0, 800.0);
  if (name == "ecg_am") return ecg(seed, options, 0.0, 0.15, 600.0);
  if (name == "ecg_plain") return ecg(seed, options, 0.0, 0.0, 600.0);
  if (name == "abp") return abp(seed, options);
  if (name == "manifold") return manifold(seed, options);
  throw ConfigError("unknown scenario: " + std::string(name));
}

std::vector<std::string> scenario_names() {
  return {"pvc10", "ectopy10", "ecg_am", "ecg_plain", "abp", "manifold"};
}

}  // namespace ddmap
