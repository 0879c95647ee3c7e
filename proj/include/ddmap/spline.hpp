#pragma once

#include <span>
#include <vector>

namespace ddmap {

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing knots. Outside the knot range the end cubic pieces
/// are extended.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  std::vector<double> operator()(std::span<const double> t) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace ddmap
