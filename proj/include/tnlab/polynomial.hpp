// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/interval.hpp"
#include "tnlab/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tnlab {

/// Exponent vector of a monomial; its length is the number of variables.
using Monomial = std::vector<unsigned>;

/// Multivariate polynomial with exact rational coefficients. Terms with a zero
/// coefficient are never stored.
class Polynomial {
 public:
  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  static Polynomial monomial(const Monomial& exp, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(int d) const;
  Rational coefficient(const Monomial& exp) const;

  void add_term(const Monomial& exp, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned e) const;
  Polynomial derivative(std::size_t i) const;
  /// Substitute polynomial expressions (all in a common ring) for each variable.
  Polynomial substitute(std::span<const Polynomial> values) const;

  Rational eval(std::span<const Rational> x) const;
  /// Plain floating evaluation (not certified); coefficients rounded to nearest.
  double eval_fast(std::span<const double> x) const;

  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  std::size_t nvars_;
  std::map<Monomial, Rational> terms_;
};

/// Flattened polynomial for fast floating and interval evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  std::size_t nvars() const { return nvars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return coeff_.empty(); }

  double eval(std::span<const double> x) const;
  double eval(const std::vector<std::vector<double>>& powers) const;
  /// Rigorous enclosure over a box. `powers[i][e]` must enclose X_i^e for
  /// e <= max_exponent(); see make_power_table.
  Interval eval(const std::vector<std::vector<Interval>>& powers) const;
  Interval eval(std::span<const Interval> box) const;
  unsigned max_exponent() const { return max_exp_; }

 private:
  std::size_t nvars_ = 0;
  int degree_ = -1;
  unsigned max_exp_ = 0;
  std::vector<double> coeff_;
  std::vector<Interval> coeff_enc_;
  std::vector<unsigned> exps_;  // row-major, nvars_ per term
};

std::vector<std::vector<Interval>> make_power_table(std::span<const Interval> box, unsigned max_exp);
std::vector<std::vector<double>> make_power_table(std::span<const double> x, unsigned max_exp);

}  // namespace tnlab
