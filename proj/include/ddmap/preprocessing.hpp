#pragma once

// Signal conditioning used ahead of landmark detection: zero-phase lowpass,
// median-filter baseline removal and detrending, band-limited upsampling.

#include <cstddef>
#include <span>
#include <vector>

#include "ddmap/time_series.hpp"

namespace ddmap {

/// Transfer function b(z)/a(z) with a[0] == 1.
struct IirFilter {
  std::vector<double> b;
  std::vector<double> a;
};

/// Digital Butterworth lowpass via the bilinear transform with frequency
/// pre-warping, scaled to unit gain at DC.
IirFilter butterworth_lowpass(int order, double cutoff_hz, double fs);

/// Direct form II transposed. zi (length max(|a|,|b|) - 1) may be empty.
std::vector<double> lfilter(const IirFilter& filter, std::span<const double> x,
                            std::span<const double> zi = {});

/// Initial state giving the step response steady state (scipy lfilter_zi).
std::vector<double> lfilter_zi(const IirFilter& filter);

/// Forward-backward filtering; odd reflection of pad_len samples on both
/// sides, steady-state initial conditions, then cropping.
std::vector<double> filtfilt(const IirFilter& filter, std::span<const double> x,
                             std::size_t pad_len);

/// Throws ConfigError if cutoff is not inside (0, fs/2) or order < 1.
TimeSeries butterworth_lowpass_bidirectional(const TimeSeries& x, int order = 3,
                                             double cutoff_hz = 40.0);

/// round-half-up(window_ms * fs / 1000), bumped to the next odd integer.
std::size_t median_window_samples(double window_ms, double fs);

/// Centered running median over an odd window. Near the edges the window
/// shrinks symmetrically so it always holds an odd number of real samples.
std::vector<double> running_median(std::span<const double> x, std::size_t window);

/// Throws ConfigError when the window is below 3 samples or longer than x.
TimeSeries median_filter(const TimeSeries& x, double window_ms);

/// x - median_filter(median_filter(x, first_ms), second_ms).
TimeSeries remove_baseline_two_step(const TimeSeries& x, double first_ms = 200.0,
                                    double second_ms = 600.0);

/// Zero-pads the spectrum. target_fs * n / fs must be an integer.
TimeSeries fourier_upsample(const TimeSeries& x, double target_fs);

/// x - median_filter(x, 1000 * window_s). Warns when the window is shorter
/// than the oscillation period estimated from zero crossings.
TimeSeries detrend_median(const TimeSeries& x, double window_s = 2.0);

}  // namespace ddmap
