#include "ddmap/time_series.hpp"

#include <cmath>
#include <string>

#include "ddmap/error.hpp"

namespace ddmap {

TimeSeries::TimeSeries(std::vector<double> samples, double fs, double t0)
    : samples_(std::move(samples)), fs_(fs), t0_(t0) {
  if (!(fs_ > 0.0) || !std::isfinite(fs_)) throw ConfigError("sampling rate must be positive");
  if (!std::isfinite(t0_)) throw ConfigError("start time must be finite");
  if (samples_.size() < 2) throw ConfigError("time series needs at least two samples");
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      throw ConfigError("non-finite sample at index " + std::to_string(i));
}

TimeSeries TimeSeries::with_samples(std::vector<double> samples) const {
  return TimeSeries(std::move(samples), fs_, t0_);
}

LandmarkSequence::LandmarkSequence(std::vector<std::size_t> indices, double fs)
    : indices_(std::move(indices)), fs_(fs) {
  if (!(fs_ > 0.0)) throw ConfigError("sampling rate must be positive");
  for (std::size_t i = 1; i < indices_.size(); ++i)
    if (indices_[i] <= indices_[i - 1])
      throw ConfigError("landmarks must be strictly increasing (index " + std::to_string(i) + ")");
}

void LandmarkSequence::check_within(std::size_t n) const {
  if (!indices_.empty() && indices_.back() >= n)
    throw ConfigError("landmark " + std::to_string(indices_.back()) +
                      " outside signal of length " + std::to_string(n));
}

}  // namespace ddmap
