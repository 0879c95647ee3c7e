#include "ddmap/preprocessing.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "ddmap/diagnostics.hpp"
#include "ddmap/error.hpp"

namespace ddmap {
namespace {

using cd = std::complex<double>;

// Coefficients of prod (z - r_k), highest power first.
std::vector<cd> poly_from_roots(const std::vector<cd>& roots) {
  std::vector<cd> c{1.0};
  for (const cd& r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

class SlidingMedian {
 public:
  void insert(double v) {
    if (lo_.empty() || v <= *lo_.rbegin())
      lo_.insert(v);
    else
      hi_.insert(v);
    rebalance();
  }
  void erase(double v) {
    if (!lo_.empty() && v <= *lo_.rbegin())
      lo_.erase(lo_.find(v));
    else
      hi_.erase(hi_.find(v));
    rebalance();
  }
  // Only called with an odd count, so this is an actual sample.
  double median() const { return *lo_.rbegin(); }

 private:
  void rebalance() {
    while (lo_.size() > hi_.size() + 1) {
      auto it = std::prev(lo_.end());
      hi_.insert(*it);
      lo_.erase(it);
    }
    while (hi_.size() > lo_.size()) {
      auto it = hi_.begin();
      lo_.insert(*it);
      hi_.erase(it);
    }
  }
  std::multiset<double> lo_, hi_;
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

IirFilter butterworth_lowpass(int order, double cutoff_hz, double fs) {
  if (order < 1) throw ConfigError("filter order must be at least 1");
  if (!(fs > 0.0)) throw ConfigError("sampling rate must be positive");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0))
    throw ConfigError("cutoff must lie strictly between 0 and the Nyquist frequency");

  const double fs2 = 2.0 * fs;
  const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / fs);
  std::vector<cd> poles, zeros;
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const cd s = warped * std::polar(1.0, theta);
    poles.push_back((fs2 + s) / (fs2 - s));
    zeros.emplace_back(-1.0, 0.0);
  }
  const auto a = poly_from_roots(poles);
  const auto b = poly_from_roots(zeros);

  double sum_a = 0.0, sum_b = 0.0;
  for (const auto& c : a) sum_a += c.real();
  for (const auto& c : b) sum_b += c.real();
  const double gain = sum_a / sum_b;

  IirFilter f;
  for (const auto& c : b) f.b.push_back(gain * c.real());
  for (const auto& c : a) f.a.push_back(c.real());
  return f;
}

std::vector<double> lfilter(const IirFilter& filter, std::span<const double> x,
                            std::span<const double> zi) {
  const std::size_t m = std::max(filter.a.size(), filter.b.size());
  std::vector<double> b(filter.b), a(filter.a);
  b.resize(m, 0.0);
  a.resize(m, 0.0);
  if (a[0] != 1.0) {
    const double a0 = a[0];
    for (auto& v : a) v /= a0;
    for (auto& v : b) v /= a0;
  }
  std::vector<double> z(m - 1, 0.0);
  if (!zi.empty()) {
    if (zi.size() != m - 1) throw ConfigError("initial state has the wrong length");
    std::copy(zi.begin(), zi.end(), z.begin());
  }
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double out = b[0] * x[n] + (m > 1 ? z[0] : 0.0);
    for (std::size_t k = 1; k < m; ++k)
      z[k - 1] = b[k] * x[n] - a[k] * out + (k < m - 1 ? z[k] : 0.0);
    y[n] = out;
  }
  return y;
}

std::vector<double> lfilter_zi(const IirFilter& filter) {
  const std::size_t m = std::max(filter.a.size(), filter.b.size());
  if (m < 2) return {};
  std::vector<double> b(filter.b), a(filter.a);
  b.resize(m, 0.0);
  a.resize(m, 0.0);
  const std::size_t n = m - 1;
  Eigen::MatrixXd i_minus_a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                        static_cast<Eigen::Index>(n));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  // I - companion(a)^T, companion having -a[1:] on its first row.
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    i_minus_a(ii, 0) += a[i + 1] / a[0];
    if (i + 1 < n) i_minus_a(ii, ii + 1) -= 1.0;
    rhs(ii) = b[i + 1] / a[0] - a[i + 1] / a[0] * b[0] / a[0];
  }
  const Eigen::VectorXd zi = i_minus_a.partialPivLu().solve(rhs);
  return {zi.data(), zi.data() + zi.size()};
}

std::vector<double> filtfilt(const IirFilter& filter, std::span<const double> x,
                             std::size_t pad_len) {
  const std::size_t n = x.size();
  if (n < 2) throw ConfigError("signal too short to filter");
  pad_len = std::min(pad_len, n - 1);

  std::vector<double> ext;
  ext.reserve(n + 2 * pad_len);
  for (std::size_t k = pad_len; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad_len; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

  const auto zi = lfilter_zi(filter);
  auto scaled = [&](double v) {
    std::vector<double> z(zi);
    for (auto& e : z) e *= v;
    return z;
  };
  auto fwd = lfilter(filter, ext, scaled(ext.front()));
  std::reverse(fwd.begin(), fwd.end());
  auto bwd = lfilter(filter, fwd, scaled(fwd.front()));
  std::reverse(bwd.begin(), bwd.end());
  return {bwd.begin() + static_cast<std::ptrdiff_t>(pad_len),
          bwd.begin() + static_cast<std::ptrdiff_t>(pad_len + n)};
}

TimeSeries butterworth_lowpass_bidirectional(const TimeSeries& x, int order, double cutoff_hz) {
  const auto filter = butterworth_lowpass(order, cutoff_hz, x.fs());
  return x.with_samples(filtfilt(filter, x.samples(), 3 * static_cast<std::size_t>(order)));
}

std::size_t median_window_samples(double window_ms, double fs) {
  if (!(window_ms > 0.0) || !std::isfinite(window_ms))
    throw ConfigError("median window must be positive");
  auto w = static_cast<std::size_t>(std::floor(window_ms * fs / 1000.0 + 0.5));
  if (w % 2 == 0) ++w;
  return w;
}

std::vector<double> running_median(std::span<const double> x, std::size_t window) {
  const std::size_t n = x.size();
  if (window < 3) throw ConfigError("median window shorter than 3 samples");
  if (window % 2 == 0) throw ConfigError("median window must be odd");
  if (window > n) throw ConfigError("median window longer than signal");
  const std::size_t h = window / 2;

  std::vector<double> y(n);
  SlidingMedian med;
  // Current window is [lo, hi]; it is centered on i with half-width
  // min(h, i, n - 1 - i).
  std::size_t lo = 0, hi = 0;
  med.insert(x[0]);
  y[0] = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t half = std::min({h, i, n - 1 - i});
    const std::size_t new_lo = i - half, new_hi = i + half;
    while (hi < new_hi) med.insert(x[++hi]);
    while (lo < new_lo) med.erase(x[lo++]);
    // At the right edge hi stays at n - 1 while lo advances by two.
    y[i] = med.median();
  }
  return y;
}

TimeSeries median_filter(const TimeSeries& x, double window_ms) {
  const std::size_t w = median_window_samples(window_ms, x.fs());
  return x.with_samples(running_median(x.samples(), w));
}

TimeSeries remove_baseline_two_step(const TimeSeries& x, double first_ms, double second_ms) {
  const auto baseline = median_filter(median_filter(x, first_ms), second_ms);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - baseline[i];
  return x.with_samples(std::move(out));
}

TimeSeries fourier_upsample(const TimeSeries& x, double target_fs) {
  if (!(target_fs > x.fs())) throw ConfigError("target rate must exceed the input rate");
  const std::size_t n = x.size();
  const double exact = static_cast<double>(n) * target_fs / x.fs();
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-9 * exact)
    throw ConfigError("upsampled length is not an integer");
  const auto m = static_cast<std::size_t>(rounded);

  const std::size_t nb = n / 2 + 1, mb = m / 2 + 1;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(mb));
  std::unique_ptr<double, FftwFree> out(fftw_alloc_real(m));
  std::copy(x.samples().begin(), x.samples().end(), in.get());
  std::fill_n(reinterpret_cast<double*>(spec.get()), 2 * mb, 0.0);

  fftw_plan forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), spec.get(),
                                           FFTW_ESTIMATE);
  fftw_execute(forward);
  fftw_destroy_plan(forward);
  // With an even input length the Nyquist bin is shared by +-n/2; after
  // padding those become distinct bins, each holding half.
  if (n % 2 == 0) {
    spec.get()[nb - 1][0] *= 0.5;
    spec.get()[nb - 1][1] *= 0.5;
  }
  fftw_plan backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec.get(), out.get(),
                                            FFTW_ESTIMATE);
  fftw_execute(backward);
  fftw_destroy_plan(backward);

  std::vector<double> y(out.get(), out.get() + m);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : y) v *= scale;
  return TimeSeries(std::move(y), target_fs, x.t0());
}

TimeSeries detrend_median(const TimeSeries& x, double window_s) {
  const auto s = x.samples();
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  std::vector<std::size_t> crossings;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] - mean < 0.0 && s[i] - mean >= 0.0) crossings.push_back(i);
  if (crossings.size() >= 2) {
    const double period = static_cast<double>(crossings.back() - crossings.front()) /
                          static_cast<double>(crossings.size() - 1) / x.fs();
    if (window_s < period)
      warn("detrend window " + std::to_string(window_s) +
           " s is shorter than the oscillation period (" + std::to_string(period) +
           " s); the trend estimate will follow the pulses");
  }

  const auto trend = median_filter(x, 1000.0 * window_s);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] - trend[i];
  return x.with_samples(std::move(out));
}

}  // namespace ddmap
