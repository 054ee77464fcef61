// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace tnlab {

// Closed interval with outward rounding: every operation widens its
// round-to-nearest result by one ulp on each side, so the true result of the
// real operation on any members of the operands is always enclosed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static Interval entire() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }

  double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  /// Smallest |v| over the interval.
  double mig() const;
  /// Largest |v| over the interval.
  double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
};

inline double round_down(double v) {
  return v == -std::numeric_limits<double>::infinity() ? v : std::nextafter(v, -std::numeric_limits<double>::infinity());
}
inline double round_up(double v) {
  return v == std::numeric_limits<double>::infinity() ? v : std::nextafter(v, std::numeric_limits<double>::infinity());
}

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval& operator+=(Interval& a, const Interval& b);
Interval& operator*=(Interval& a, const Interval& b);

Interval sqr(const Interval& a);
Interval pow(const Interval& a, unsigned e);
Interval sqrt(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
/// Intersection; callers guarantee the operands overlap.
Interval intersect(const Interval& a, const Interval& b);

/// Enclosures of cos and sin over an angle interval.
Interval cos(const Interval& t);
Interval sin(const Interval& t);

/// Upper bound of sqrt(sum mag(x_i)^2).
double norm_upper(std::span<const Interval> xs);
/// Lower bound of sqrt(sum mig(x_i)^2).
double norm_lower(std::span<const Interval> xs);

}  // namespace tnlab
