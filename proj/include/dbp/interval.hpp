#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dbp {

// Integration domain. Either endpoint may be infinite.
struct Interval {
  double lower;
  double upper;

  Interval(double lo, double hi) : lower(lo), upper(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
      throw std::invalid_argument("Interval requires lower < upper");
  }

  bool lower_finite() const { return std::isfinite(lower); }
  bool upper_finite() const { return std::isfinite(upper); }

  static constexpr double inf = std::numeric_limits<double>::infinity();
  static Interval real_line() { return {-inf, inf}; }
  static Interval positive_axis() { return {0.0, inf}; }
  static Interval right_of(double a) { return {a, inf}; }
  static Interval left_of(double b) { return {-inf, b}; }
};

}  // namespace dbp
