// SPDX-License-Identifier: Apache-2.0
// Seeded generators for property tests.
#pragma once

#include "tnlab/polymap.hpp"
#include "tnlab/rational.hpp"
#include "tnlab/symbil.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    s_ += 0x9e3779b97f4a7c15ULL;
    return tnlab::splitmix64(s_);
  }
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * double(next() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + int(next() % std::uint64_t(hi - lo + 1)); }
  double normal() {
    double u = uniform(1e-300, 1.0), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
  std::vector<double> point(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> x(n);
    for (auto& c : x) c = uniform(lo, hi);
    return x;
  }
  std::vector<double> unit(std::size_t n) {
    std::vector<double> x(n);
    double s = 0.0;
    for (auto& c : x) s += (c = normal()) * c;
    for (auto& c : x) c /= std::sqrt(s);
    return x;
  }
  tnlab::Rational rational(int num = 9, int den = 4) {
    tnlab::Rational r(integer(-num, num), integer(1, den));
    r.canonicalize();
    return r;
  }
  std::vector<tnlab::Rational> rational_point(std::size_t n) {
    std::vector<tnlab::Rational> x(n);
    for (auto& c : x) c = rational();
    return x;
  }

  // random polynomial in n variables with total degree <= d
  tnlab::Polynomial polynomial(std::size_t n, int d, int terms) {
    tnlab::Polynomial p(n);
    for (int t = 0; t < terms; ++t) {
      tnlab::Monomial e(n, 0);
      int left = integer(0, d);
      for (std::size_t i = 0; i < n && left > 0; ++i) {
        int k = i + 1 == n ? left : integer(0, left);
        e[i] = unsigned(k);
        left -= k;
      }
      p.add_term(e, rational());
    }
    return p;
  }
  tnlab::PolyMap polymap(std::size_t n, std::size_t q, int d, int terms = 5) {
    std::vector<tnlab::Polynomial> c;
    for (std::size_t k = 0; k < q; ++k) c.push_back(polynomial(n, d, terms));
    return tnlab::PolyMap(n, std::move(c));
  }
  // homogeneous quadratic R^n -> R^p with small integer coefficients
  tnlab::PolyMap quadratic(std::size_t n, std::size_t p) {
    std::vector<tnlab::Polynomial> c;
    for (std::size_t k = 0; k < p; ++k) {
      tnlab::Polynomial poly(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          tnlab::Monomial e(n, 0);
          ++e[i];
          ++e[j];
          poly.add_term(e, tnlab::Rational(integer(-5, 5)));
        }
      }
      c.push_back(poly);
    }
    return tnlab::PolyMap(n, std::move(c));
  }

 private:
  std::uint64_t s_;
};

}  // namespace gen
