#include "ddmap/spline.hpp"

#include <algorithm>
#include <cmath>

#include "ddmap/error.hpp"

namespace ddmap {

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw ConfigError("spline needs matching knots and values, n >= 2");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw ConfigError("non-finite spline knot");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw ConfigError("spline knots must be strictly increasing");

  m_.assign(n, 0.0);
  if (n < 3) return;
  // Thomas algorithm on the interior equations
  //   h_{i-1} m_{i-1} + 2 (h_{i-1} + h_i) m_i + h_i m_{i+1} = 6 (s_i - s_{i-1}).
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = j + 1;
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    diag[j] = 2.0 * (h0 + h1);
    upper[j] = h1;
    rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t j = 1; j < k; ++j) {
    const double lower = x_[j + 1] - x_[j];
    const double w = lower / diag[j - 1];
    diag[j] -= w * upper[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t j = k - 1; j-- > 0;) m_[j + 1] = (rhs[j] - upper[j] * m_[j + 2]) / diag[j];
}

double NaturalCubicSpline::operator()(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

std::vector<double> NaturalCubicSpline::operator()(std::span<const double> t) const {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = (*this)(t[i]);
  return out;
}

}  // namespace ddmap
