// SPDX-License-Identifier: Apache-2.0
#include "tnlab/interval.hpp"

#include <numbers>

namespace tnlab {

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo), std::fabs(hi));
}

Interval operator+(const Interval& a, const Interval& b) { return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)}; }

Interval operator-(const Interval& a, const Interval& b) { return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)}; }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  // exact degenerate case keeps point arithmetic tight
  if (a.lo == a.hi && b.lo == b.hi) {
    double p = a.lo * b.lo;
    if (a.lo == 0.0 || b.lo == 0.0) return {0.0, 0.0};
    return {round_down(p), round_up(p)};
  }
  double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  // 0 * inf never arises for the finite boxes used here
  double lo = std::min({p1, p2, p3, p4});
  double hi = std::max({p1, p2, p3, p4});
  return {round_down(lo), round_up(hi)};
}

Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

Interval sqr(const Interval& a) {
  double m = a.mig(), M = a.mag();
  double lo = m * m, hi = M * M;
  return {lo == 0.0 ? 0.0 : round_down(lo), round_up(hi)};
}

Interval pow(const Interval& a, unsigned e) {
  if (e == 0) return {1.0, 1.0};
  if (e == 1) return a;
  if (e % 2 == 0) {
    // even power: monotone in |x|
    double m = a.mig(), M = a.mag();
    double lo = 1.0, hi = 1.0;
    for (unsigned k = 0; k < e; ++k) {
      lo = round_down(lo * m);
      hi = round_up(hi * M);
    }
    return {std::max(lo, 0.0), hi};
  }
  // odd power: monotone increasing
  auto odd = [e](double v, bool up) {
    double s = std::fabs(v), r = 1.0;
    bool neg = v < 0;
    bool round_mag_up = up != neg;
    for (unsigned k = 0; k < e; ++k) r = round_mag_up ? round_up(r * s) : std::max(0.0, round_down(r * s));
    return neg ? -r : r;
  };
  return {odd(a.lo, false), odd(a.hi, true)};
}

Interval sqrt(const Interval& a) {
  double lo = a.lo <= 0.0 ? 0.0 : std::max(0.0, round_down(std::sqrt(a.lo)));
  double hi = a.hi <= 0.0 ? 0.0 : round_up(std::sqrt(a.hi));
  return {lo, hi};
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval intersect(const Interval& a, const Interval& b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.lo > r.hi) {
    // rounding noise can separate two valid enclosures by an ulp
    double m = 0.5 * (r.lo + r.hi);
    return {m, m};
  }
  return r;
}

namespace {

// libm cos/sin are within one ulp; pad by a few ulps plus an absolute margin.
Interval pad(double v) {
  double e = 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(v) + 1e-300;
  return {std::max(-1.0, v - e), std::min(1.0, v + e)};
}

}  // namespace

Interval cos(const Interval& t) {
  using std::numbers::pi;
  if (t.width() >= 2.0 * pi) return {-1.0, 1.0};
  Interval r = hull(pad(std::cos(t.lo)), pad(std::cos(t.hi)));
  // extrema at k*pi
  double k0 = std::ceil(t.lo / pi), k1 = std::floor(t.hi / pi);
  for (double k = k0; k <= k1; k += 1.0) {
    if (std::fmod(std::fabs(k), 2.0) == 0.0) r.hi = 1.0;
    else r.lo = -1.0;
  }
  return r;
}

Interval sin(const Interval& t) {
  using std::numbers::pi;
  if (t.width() >= 2.0 * pi) return {-1.0, 1.0};
  Interval r = hull(pad(std::sin(t.lo)), pad(std::sin(t.hi)));
  // extrema at pi/2 + k*pi
  double k0 = std::ceil((t.lo - pi / 2) / pi), k1 = std::floor((t.hi - pi / 2) / pi);
  for (double k = k0; k <= k1; k += 1.0) {
    if (std::fmod(std::fabs(k), 2.0) == 0.0) r.hi = 1.0;
    else r.lo = -1.0;
  }
  return r;
}

double norm_upper(std::span<const Interval> xs) {
  double s = 0.0;
  for (const auto& x : xs) s = round_up(s + round_up(x.mag() * x.mag()));
  return round_up(std::sqrt(s));
}

double norm_lower(std::span<const Interval> xs) {
  double s = 0.0;
  for (const auto& x : xs) s = std::max(0.0, round_down(s + std::max(0.0, round_down(x.mig() * x.mig()))));
  return std::max(0.0, round_down(std::sqrt(s)));
}

}  // namespace tnlab
