#include "ddmap/signal_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ddmap/diagnostics.hpp"
#include "ddmap/error.hpp"

namespace ddmap {
namespace {

constexpr double kPi = std::numbers::pi;

struct Bump {
  double weight;
  double center;
  double width;
};

// cos^3(pi t) vanishes with its first two derivatives at t = +-1/2, so a
// smooth profile multiplied by it extends by zero as a C^2 function.
double taper(double t) {
  const double c = std::cos(kPi * t);
  return c * c * c;
}

double bump_sum(std::span<const Bump> bumps, double t) {
  double v = 0.0;
  for (const auto& b : bumps) {
    const double z = (t - b.center) / b.width;
    v += b.weight * std::exp(-0.5 * z * z);
  }
  return v * taper(t);
}

constexpr Bump kGaussBump[] = {{1.0, 0.0, 0.1}};
constexpr Bump kEcgLike[] = {
    {0.12, -0.20, 0.035},  // P
    {-0.12, -0.030, 0.010},  // Q
    {1.00, 0.0, 0.012},    // R
    {-0.25, 0.028, 0.010},  // S
    {0.30, 0.24, 0.050},   // T
};
constexpr Bump kPvcLike[] = {
    {1.00, 0.0, 0.025},
    {-0.45, 0.06, 0.025},
    {-0.30, 0.25, 0.050},
};
constexpr Bump kAbpLike[] = {
    {1.00, 0.0, 0.070},   // systolic wave
    {0.45, 0.20, 0.070},  // reflected / dicrotic wave
};
// Smoothed stand-in for the Daubechies-4 wavelet: asymmetric, oscillating,
// one dominant positive lobe.
constexpr Bump kDb4Like[] = {
    {0.25, -0.22, 0.05}, {-0.45, -0.10, 0.05}, {1.00, 0.02, 0.055},
    {-0.70, 0.14, 0.05}, {0.20, 0.26, 0.05},
};

std::span<const Bump> bumps_for(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::GaussBump: return kGaussBump;
    case TemplateKind::EcgLike: return kEcgLike;
    case TemplateKind::AbpLike: return kAbpLike;
    case TemplateKind::Db4Like: return kDb4Like;
    case TemplateKind::PvcLike: return kPvcLike;
  }
  throw ConfigError("unknown template");
}

void check_chart_domain(double a, double f) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("amplitude must be positive");
  if (!(f > 1.0) || !std::isfinite(f)) throw ConfigError("frequency outside chart domain");
}

std::size_t sample_count(double duration, double fs) {
  if (!(fs > 0.0)) throw ConfigError("sampling rate must be positive");
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  const auto n = static_cast<std::size_t>(std::floor(duration * fs));
  if (n < 2) throw ConfigError("duration too short for sampling rate");
  return n;
}

// Second-order accurate derivative on a uniform grid, exact for quadratics.
std::vector<double> gradient(std::span<const double> y, double dt) {
  const std::size_t n = y.size();
  std::vector<double> g(n);
  if (n < 3) throw ConfigError("need at least three samples for derivatives");
  g[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
  g[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
  return g;
}

double central_derivative(const ScalarFunction& fn, double t) {
  constexpr double h = 1e-5;
  return (fn(t + h) - fn(t - h)) / (2.0 * h);
}

double phase_rate_at(const PhenomenologicalSpec& spec, double t) {
  return spec.phase_rate ? spec.phase_rate(t) : central_derivative(spec.phase, t);
}

std::vector<double> sample_function(const ScalarFunction& fn, std::size_t n, double fs) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = fn(static_cast<double>(k) / fs);
  return out;
}

// Piecewise-linear interpolation through (times, values), held constant
// outside the covered range.
std::vector<double> hold_interpolate(std::span<const double> times, std::span<const double> values,
                                     std::size_t n, double fs) {
  std::vector<double> out(n, values.empty() ? 0.0 : values.front());
  if (times.empty()) return out;
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    while (j + 1 < times.size() && times[j + 1] <= t) ++j;
    if (t <= times.front()) {
      out[k] = values.front();
    } else if (j + 1 >= times.size()) {
      out[k] = values.back();
    } else {
      const double w = (t - times[j]) / (times[j + 1] - times[j]);
      out[k] = values[j] + w * (values[j + 1] - values[j]);
    }
  }
  return out;
}

double uniform_in(std::mt19937_64& rng, Interval range) {
  std::uniform_real_distribution<double> u(range.lo, range.hi);
  return range.hi > range.lo ? u(rng) : range.lo;
}

double reflect_into(double v, Interval range) {
  const double width = range.hi - range.lo;
  if (width <= 0.0) return range.lo;
  for (int guard = 0; guard < 64 && (v < range.lo || v > range.hi); ++guard) {
    if (v < range.lo) v = 2.0 * range.lo - v;
    if (v > range.hi) v = 2.0 * range.hi - v;
  }
  return std::clamp(v, range.lo, range.hi);
}

double jittered(std::mt19937_64& rng, double mean, double jitter) {
  if (jitter <= 0.0) return mean;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return mean * (1.0 + jitter * u(rng));
}

std::vector<CycleEvent> iid_cycles(const IidOnManifold& p, std::mt19937_64& rng, double start,
                                   double duration) {
  if (!(p.mean_interval > 0.0)) throw ConfigError("mean interval must be positive");
  std::vector<CycleEvent> events;
  auto draw = [&](Interval range) {
    if (p.grid_points < 2) return uniform_in(rng, range);
    std::uniform_int_distribution<std::size_t> pick(0, p.grid_points - 1);
    return range.lo + (range.hi - range.lo) * static_cast<double>(pick(rng)) /
                          static_cast<double>(p.grid_points - 1);
  };
  for (double t = start; t < duration; t += jittered(rng, p.mean_interval, p.interval_jitter)) {
    const double a = draw(p.amplitude);
    const double f = draw(p.frequency);
    events.push_back({t, a, f, p.label});
  }
  return events;
}

std::vector<CycleEvent> walk_cycles(const RandomWalkOnParameters& p, std::mt19937_64& rng,
                                    double start, double duration) {
  if (!(p.mean_interval > 0.0)) throw ConfigError("mean interval must be positive");
  std::normal_distribution<double> step(0.0, 1.0);
  std::vector<CycleEvent> events;
  double a = p.start_amplitude;
  double f = p.start_frequency;
  for (double t = start; t < duration; t += jittered(rng, p.mean_interval, p.interval_jitter)) {
    events.push_back({t, a, f, p.label});
    a = reflect_into(a + p.step_amplitude * step(rng), p.amplitude);
    f = reflect_into(f + p.step_frequency * step(rng), p.frequency);
  }
  return events;
}

std::vector<CycleEvent> markov_cycles(const TwoClassMarkov& p, std::mt19937_64& rng, double start,
                                      double duration) {
  const double pi_e = p.ectopic_fraction;
  const double p_ee = p.ectopic_persistence;
  if (pi_e < 0.0 || pi_e >= 1.0) throw ConfigError("ectopic fraction must lie in [0, 1)");
  if (p_ee < 0.0 || p_ee >= 1.0) throw ConfigError("ectopic persistence must lie in [0, 1)");
  if (!(p.prematurity > 0.0 && p.prematurity < 1.0))
    throw ConfigError("prematurity must lie in (0, 1)");
  if (!(p.mean_interval > 0.0)) throw ConfigError("mean interval must be positive");
  // Stationary probability of the ectopic state is p_ne / (1 - p_ee + p_ne).
  const double p_ne = pi_e * (1.0 - p_ee) / (1.0 - pi_e);
  if (p_ne > 1.0) throw ConfigError("ectopic fraction unreachable with this persistence");

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const auto& am = p.modulation;
  auto amplitude_at = [&](double base, double t) {
    return base * (1.0 + am.depth * std::sin(2.0 * kPi * am.frequency_hz * t + am.phase));
  };

  std::vector<CycleEvent> events;
  int previous = 0;
  double t = start;
  while (t < duration) {
    const int label = events.empty() ? 0 : previous;
    const bool ectopic = label == 1;
    events.push_back({t, amplitude_at(ectopic ? p.ectopic_amplitude : p.normal_amplitude, t),
                      ectopic ? p.ectopic_frequency : p.normal_frequency, label});
    const double u = coin(rng);
    const int next = ectopic ? (u < p_ee ? 1 : 0) : (u < p_ne ? 1 : 0);
    const double rr = jittered(rng, p.mean_interval, p.interval_jitter);
    double interval = rr;
    if (next == 1)
      interval = p.prematurity * rr;
    else if (ectopic)
      interval = (2.0 - p.prematurity) * rr;  // compensatory pause
    previous = next;
    t += interval;
  }
  return events;
}

}  // namespace

// ---------------------------------------------------------------------------

TemplateKind parse_template_kind(std::string_view name) {
  if (name == "gauss_bump") return TemplateKind::GaussBump;
  if (name == "ecg_like") return TemplateKind::EcgLike;
  if (name == "abp_like") return TemplateKind::AbpLike;
  if (name == "db4_like") return TemplateKind::Db4Like;
  if (name == "pvc_like") return TemplateKind::PvcLike;
  throw ConfigError("unknown template: " + std::string(name));
}

std::string_view to_string(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::GaussBump: return "gauss_bump";
    case TemplateKind::EcgLike: return "ecg_like";
    case TemplateKind::AbpLike: return "abp_like";
    case TemplateKind::Db4Like: return "db4_like";
    case TemplateKind::PvcLike: return "pvc_like";
  }
  return "unknown";
}

double WaveShapeTemplate::operator()(double phase) const {
  if (!(phase >= -0.5 && phase <= 0.5)) return 0.0;
  const double pos = (phase + 0.5) * static_cast<double>(values.size() - 1);
  auto i = static_cast<std::size_t>(pos);
  if (i >= values.size() - 1) i = values.size() - 2;
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

double WaveShapeTemplate::periodic(double phase) const {
  return (*this)(phase - std::round(phase));
}

WaveShapeTemplate make_template(TemplateKind kind, std::size_t resolution) {
  if (resolution < 32) throw ConfigError("resolution too small");
  const auto bumps = bumps_for(kind);
  WaveShapeTemplate tpl;
  tpl.name = std::string(to_string(kind));
  tpl.grid.resize(resolution);
  tpl.values.resize(resolution);
  const double step = 1.0 / static_cast<double>(resolution - 1);
  for (std::size_t k = 0; k < resolution; ++k) {
    const double t = -0.5 + static_cast<double>(k) * step;
    tpl.grid[k] = t;
    tpl.values[k] = bump_sum(bumps, t);
  }
  tpl.grid.back() = 0.5;
  tpl.values.front() = 0.0;
  tpl.values.back() = 0.0;
  return tpl;
}

WaveShapeTemplate make_template(std::string_view name, std::size_t resolution) {
  return make_template(parse_template_kind(name), resolution);
}

std::vector<double> manifold_point(const WaveShapeTemplate& shape, double a, double f) {
  return manifold_point(shape, a, f, shape.grid);
}

std::vector<double> manifold_point(const WaveShapeTemplate& shape, double a, double f,
                                   std::span<const double> t) {
  check_chart_domain(a, f);
  std::vector<double> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = a * shape(f * t[k]);
  return out;
}

RenderedCycle render_cycle(const WaveShapeTemplate& shape, double a, double f, double fs,
                           std::ptrdiff_t onset, double offset) {
  check_chart_domain(a, f);
  const auto half = static_cast<std::ptrdiff_t>(std::floor(fs / (2.0 * f)));
  RenderedCycle cycle;
  cycle.first = onset - half;
  cycle.values.resize(static_cast<std::size_t>(2 * half + 1));
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double u = (static_cast<double>(k) - offset) / fs;
    cycle.values[static_cast<std::size_t>(k + half)] = a * shape(f * u);
  }
  return cycle;
}

// ---------------------------------------------------------------------------

SlowVariationReport slow_variation_check(const PhenomenologicalSpec& spec) {
  if (!spec.amplitude || !spec.phase) throw ConfigError("amplitude and phase are required");
  const std::size_t n = sample_count(spec.duration, spec.fs);
  const double dt = 1.0 / spec.fs;
  const auto a = sample_function(spec.amplitude, n, spec.fs);
  const auto phi = sample_function(spec.phase, n, spec.fs);
  const auto da = gradient(a, dt);
  const auto dphi = gradient(phi, dt);
  const auto ddphi = gradient(dphi, dt);

  SlowVariationReport report;
  report.epsilon = spec.epsilon;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(dphi[k] > 0.0)) {
      report.amplitude_ratio = report.phase_ratio = INFINITY;
      break;
    }
    report.amplitude_ratio = std::max(report.amplitude_ratio, std::abs(da[k]) / dphi[k]);
    report.phase_ratio = std::max(report.phase_ratio, std::abs(ddphi[k]) / dphi[k]);
  }
  report.pass = report.amplitude_ratio <= spec.epsilon && report.phase_ratio <= spec.epsilon;
  return report;
}

SyntheticDataset synth_phenomenological(const PhenomenologicalSpec& spec) {
  if (!spec.amplitude || !spec.phase) throw ConfigError("amplitude and phase are required");
  if (spec.shape.values.size() < 2) throw ConfigError("template is empty");
  if (spec.noise_std < 0.0) throw ConfigError("noise_std must be non-negative");
  const std::size_t n = sample_count(spec.duration, spec.fs);

  const auto phi = sample_function(spec.phase, n, spec.fs);
  for (std::size_t k = 1; k < n; ++k)
    if (!(phi[k] > phi[k - 1]))
      throw ConfigError("phase is not strictly increasing at sample " + std::to_string(k));

  std::vector<double> signal(n);
  std::vector<double> amp(n), rate(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / spec.fs;
    amp[k] = spec.amplitude(t);
    rate[k] = phase_rate_at(spec, t);
    signal[k] = amp[k] * spec.shape.periodic(phi[k]) + (spec.trend ? spec.trend(t) : 0.0);
  }
  if (spec.noise_std > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_std);
    for (auto& v : signal) v += noise(rng);
  }

  // Landmarks t_m = phi^{-1}(m) for every integer m reached on the grid.
  std::vector<double> times;
  std::vector<std::size_t> onsets;
  std::vector<CycleParams> cycles;
  const auto first = static_cast<long long>(std::ceil(phi.front()));
  const auto last = static_cast<long long>(std::floor(phi.back()));
  for (long long m = first; m <= last; ++m) {
    const double target = static_cast<double>(m);
    const auto it = std::lower_bound(phi.begin(), phi.end(), target);
    const auto k = static_cast<std::size_t>(it - phi.begin());
    double t;
    if (phi[k] == target) {
      t = static_cast<double>(k) / spec.fs;
    } else {
      double lo = static_cast<double>(k - 1) / spec.fs;
      double hi = static_cast<double>(k) / spec.fs;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (spec.phase(mid) < target ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }
    const auto sample = static_cast<std::size_t>(std::llround(t * spec.fs));
    if (sample >= n) continue;
    if (!onsets.empty() && sample <= onsets.back())
      throw Error("landmarks collide on the sample grid; phase advances too fast");
    times.push_back(t);
    onsets.push_back(sample);
    cycles.push_back({spec.amplitude(t), phase_rate_at(spec, t), 0});
  }

  return SyntheticDataset{
      .signal = TimeSeries(std::move(signal), spec.fs),
      .landmarks = LandmarkSequence(std::move(onsets), spec.fs),
      .landmark_times = std::move(times),
      .cycles = std::move(cycles),
      .amplitude_modulator = std::move(amp),
      .frequency_modulator = std::move(rate),
      .class_names = {spec.shape.name},
      .overlap_fraction = 0.0,
      .seed = spec.seed,
  };
}

double max_constant_parameter_deviation(const PhenomenologicalSpec& spec,
                                        const SyntheticDataset& data) {
  const auto x = data.signal.samples();
  const double fs = data.signal.fs();
  double worst = -1.0;
  for (double tn : data.landmark_times) {
    const double rate = phase_rate_at(spec, tn);
    const double amp = spec.amplitude(tn);
    const double half = 1.0 / (2.0 * rate);
    const auto k_lo = static_cast<long long>(std::ceil((tn - half) * fs));
    const auto k_hi = static_cast<long long>(std::floor((tn + half) * fs));
    if (k_lo < 0 || k_hi >= static_cast<long long>(x.size())) continue;
    double dev = 0.0;
    for (long long k = k_lo; k <= k_hi; ++k) {
      const double t = static_cast<double>(k) / fs;
      const double u = t - tn;
      const double recorded = x[static_cast<std::size_t>(k)] - (spec.trend ? spec.trend(t) : 0.0);
      const double frozen = amp * spec.shape(rate * u);
      dev = std::max(dev, std::abs(recorded - frozen));
    }
    worst = std::max(worst, dev);
  }
  if (worst < 0.0) throw Error("no complete cycle inside the signal");
  return worst;
}

TimeSeries synth_generalized(const GeneralizedSpec& spec) {
  const std::size_t K = spec.amplitudes.size();
  if (K == 0) throw ConfigError("generalized model needs at least one component");
  if (spec.phases.size() != K) throw ConfigError("amplitude and phase counts differ");
  if (spec.noise_std < 0.0) throw ConfigError("noise_std must be non-negative");
  const std::size_t n = sample_count(spec.duration, spec.fs);
  const double dt = 1.0 / spec.fs;

  std::vector<std::vector<double>> phase(K);
  for (std::size_t k = 0; k < K; ++k) phase[k] = sample_function(spec.phases[k], n, spec.fs);
  const auto a1 = sample_function(spec.amplitudes[0], n, spec.fs);
  const auto rate1 = gradient(phase[0], dt);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a1[i] > 0.0)) throw ConfigError("A_1 must be positive");
    if (!(rate1[i] > 0.0)) throw ConfigError("phi_1' must be positive");
  }
  for (std::size_t k = 1; k < K; ++k) {
    const auto rate = gradient(phase[k], dt);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst,
                       std::abs(rate[i] - static_cast<double>(k + 1) * rate1[i]) / rate1[i]);
    if (worst > spec.epsilon)
      warn("harmonic " + std::to_string(k + 1) + " violates |phi_k' - k phi_1'| <= eps phi_1' " +
           "(max ratio " + std::to_string(worst) + ", eps " + std::to_string(spec.epsilon) + ")");
  }

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    double v = spec.offset ? spec.offset(t) : 0.0;
    for (std::size_t k = 0; k < K; ++k)
      v += spec.amplitudes[k](t) * std::cos(2.0 * kPi * phase[k][i]);
    out[i] = v;
  }
  if (spec.noise_std > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_std);
    for (auto& v : out) v += noise(rng);
  }
  return TimeSeries(std::move(out), spec.fs);
}

// ---------------------------------------------------------------------------

std::vector<CycleEvent> generate_cycles(const DynamicsProcess& process, double duration) {
  std::mt19937_64 rng(process.seed);
  const double start = process.start_time;
  return std::visit(
      [&](const auto& p) -> std::vector<CycleEvent> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, IidOnManifold>) {
          return iid_cycles(p, rng, start, duration);
        } else if constexpr (std::is_same_v<P, RandomWalkOnParameters>) {
          return walk_cycles(p, rng, start, duration);
        } else if constexpr (std::is_same_v<P, TwoClassMarkov>) {
          return markov_cycles(p, rng, start, duration);
        } else {
          std::vector<CycleEvent> events;
          for (const auto& e : p.events) {
            if (!events.empty() && !(e.time > events.back().time))
              throw ConfigError("scripted cycle times must be strictly increasing");
            if (e.time < duration) events.push_back(e);
          }
          return events;
        }
      },
      process.kind);
}

SyntheticDataset synth_waveshape_model(const DynamicsProcess& process,
                                       std::span<const WaveShapeTemplate> template_bank,
                                       double noise_std, double fs, double duration) {
  if (template_bank.empty()) throw ConfigError("template bank is empty");
  if (noise_std < 0.0) throw ConfigError("noise_std must be non-negative");
  const std::size_t n = sample_count(duration, fs);
  const auto events = generate_cycles(process, duration);

  std::vector<double> signal(n, 0.0);
  std::vector<unsigned> coverage(n, 0);
  std::vector<std::size_t> onsets;
  std::vector<double> times;
  std::vector<CycleParams> cycles;
  std::vector<double> amps, freqs;

  // Ascending j keeps the summation order, and hence the bits, reproducible.
  for (const auto& e : events) {
    if (e.label < 0 || static_cast<std::size_t>(e.label) >= template_bank.size())
      throw ConfigError("cycle label " + std::to_string(e.label) + " has no template");
    const auto onset = static_cast<std::ptrdiff_t>(std::llround(e.time * fs));
    if (onset < 0 || onset >= static_cast<std::ptrdiff_t>(n)) continue;
    if (!onsets.empty() && static_cast<std::size_t>(onset) <= onsets.back())
      throw Error("cycle onsets collide on the sample grid");
    const auto cycle =
        render_cycle(template_bank[static_cast<std::size_t>(e.label)], e.amplitude, e.frequency,
                     fs, onset, e.time * fs - static_cast<double>(onset));
    for (std::size_t k = 0; k < cycle.values.size(); ++k) {
      const std::ptrdiff_t idx = cycle.first + static_cast<std::ptrdiff_t>(k);
      if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(n)) continue;
      signal[static_cast<std::size_t>(idx)] += cycle.values[k];
      ++coverage[static_cast<std::size_t>(idx)];
    }
    onsets.push_back(static_cast<std::size_t>(onset));
    times.push_back(e.time);
    cycles.push_back({e.amplitude, e.frequency, e.label});
    amps.push_back(e.amplitude);
    freqs.push_back(e.frequency);
  }
  if (onsets.empty()) throw Error("dynamics process produced no cycles inside the duration");

  std::size_t covered = 0, overlapped = 0;
  for (unsigned c : coverage) {
    covered += c >= 1;
    overlapped += c >= 2;
  }

  if (noise_std > 0.0) {
    std::mt19937_64 rng(process.seed ^ 0x9E3779B97F4A7C15ULL);
    std::normal_distribution<double> noise(0.0, noise_std);
    for (auto& v : signal) v += noise(rng);
  }

  std::vector<std::string> names;
  for (const auto& t : template_bank) names.push_back(t.name);

  auto amp_mod = hold_interpolate(times, amps, n, fs);
  auto freq_mod = hold_interpolate(times, freqs, n, fs);
  return SyntheticDataset{
      .signal = TimeSeries(std::move(signal), fs),
      .landmarks = LandmarkSequence(std::move(onsets), fs),
      .landmark_times = std::move(times),
      .cycles = std::move(cycles),
      .amplitude_modulator = std::move(amp_mod),
      .frequency_modulator = std::move(freq_mod),
      .class_names = std::move(names),
      .overlap_fraction =
          covered ? static_cast<double>(overlapped) / static_cast<double>(covered) : 0.0,
      .seed = process.seed,
  };
}

}  // namespace ddmap
