#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ddmap {

/// A uniformly sampled real signal. All samples are finite and there are at
/// least two of them; the constructor enforces this.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> samples, double fs, double t0 = 0.0);

  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& values() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  double fs() const { return fs_; }
  double t0() const { return t0_; }
  double time_at(std::size_t i) const { return t0_ + static_cast<double>(i) / fs_; }
  double duration() const { return static_cast<double>(samples_.size()) / fs_; }

  /// Same sampling grid, new values.
  TimeSeries with_samples(std::vector<double> samples) const;

 private:
  std::vector<double> samples_;
  double fs_;
  double t0_;
};

/// Cycle-onset sample positions t_1 < ... < t_N.
class LandmarkSequence {
 public:
  LandmarkSequence(std::vector<std::size_t> indices, double fs);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  double fs() const { return fs_; }

  /// Throws ConfigError unless every index is < n.
  void check_within(std::size_t n) const;

 private:
  std::vector<std::size_t> indices_;
  double fs_;
};

}  // namespace ddmap
