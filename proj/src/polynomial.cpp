// SPDX-License-Identifier: Apache-2.0
#include "tnlab/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tnlab {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  if (i >= nvars) throw std::out_of_range("variable index out of range");
  Monomial m(nvars, 0);
  m[i] = 1;
  return monomial(m, 1);
}

Polynomial Polynomial::monomial(const Monomial& exp, const Rational& c) {
  Polynomial p(exp.size());
  p.add_term(exp, c);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (unsigned e : m) s += static_cast<int>(e);
    d = std::max(d, s);
  }
  return d;
}

bool Polynomial::is_homogeneous(int d) const {
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (unsigned e : m) s += static_cast<int>(e);
    if (s != d) return false;
  }
  return true;
}

Rational Polynomial::coefficient(const Monomial& exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& exp, const Rational& c) {
  if (exp.size() != nvars_) throw std::invalid_argument("exponent vector length differs from variable count");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exp, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial ring mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial ring mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial ring mismatch");
  Polynomial r(a.nvars_);
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t i) const {
  if (i >= nvars_) throw std::out_of_range("derivative index out of range");
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial d = m;
    d[i] -= 1;
    r.add_term(d, c * m[i]);
  }
  return r;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> values) const {
  if (values.size() != nvars_) throw std::invalid_argument("substitution arity mismatch");
  if (values.empty()) return *this;
  std::size_t target = values[0].nvars();
  for (const auto& v : values) {
    if (v.nvars() != target) throw std::invalid_argument("substituted polynomials live in different rings");
  }
  // cache powers of each substituted value
  std::vector<std::vector<Polynomial>> pw(nvars_);
  Polynomial r(target);
  for (const auto& [m, c] : terms_) {
    Polynomial t = constant(target, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      auto& cache = pw[i];
      if (cache.empty()) cache.push_back(constant(target, 1));
      while (cache.size() <= m[i]) cache.push_back(cache.back() * values[i]);
      t = t * cache[m[i]];
    }
    r += t;
  }
  return r;
}

Rational Polynomial::eval(std::span<const Rational> x) const {
  if (x.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  Rational s = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (unsigned k = 0; k < m[i]; ++k) t *= x[i];
    }
    s += t;
  }
  return s;
}

double Polynomial::eval_fast(std::span<const double> x) const {
  if (x.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = to_double_nearest(c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (unsigned k = 0; k < m[i]; ++k) t *= x[i];
    }
    s += t;
  }
  return s;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest degree first reads more naturally
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational a = c;
    bool neg = a < 0;
    if (neg) a = -a;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool unit = true;
    for (unsigned e : m) unit = unit && e == 0;
    if (a != 1 || unit) os << tnlab::to_string(a);
    bool need_star = a != 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (need_star) os << '*';
      need_star = true;
      if (i < names.size()) os << names[i];
      else os << 'x' << i;
      if (m[i] > 1) os << '^' << m[i];
    }
  }
  return os.str();
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : nvars_(p.nvars()), degree_(p.degree()) {
  for (const auto& [m, c] : p.terms()) {
    coeff_.push_back(to_double_nearest(c));
    auto [lo, hi] = enclose(c);
    coeff_enc_.emplace_back(lo, hi);
    for (unsigned e : m) {
      exps_.push_back(e);
      max_exp_ = std::max(max_exp_, e);
    }
  }
}

double CompiledPolynomial::eval(std::span<const double> x) const {
  double s = 0.0;
  const unsigned* e = exps_.data();
  for (std::size_t t = 0; t < coeff_.size(); ++t, e += nvars_) {
    double v = coeff_[t];
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (unsigned k = 0; k < e[i]; ++k) v *= x[i];
    }
    s += v;
  }
  return s;
}

double CompiledPolynomial::eval(const std::vector<std::vector<double>>& powers) const {
  double s = 0.0;
  const unsigned* e = exps_.data();
  for (std::size_t t = 0; t < coeff_.size(); ++t, e += nvars_) {
    double v = coeff_[t];
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] != 0) v *= powers[i][e[i]];
    }
    s += v;
  }
  return s;
}

Interval CompiledPolynomial::eval(const std::vector<std::vector<Interval>>& powers) const {
  Interval s(0.0);
  const unsigned* e = exps_.data();
  for (std::size_t t = 0; t < coeff_enc_.size(); ++t, e += nvars_) {
    Interval v = coeff_enc_[t];
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] != 0) v *= powers[i][e[i]];
    }
    s += v;
  }
  return s;
}

Interval CompiledPolynomial::eval(std::span<const Interval> box) const {
  return eval(make_power_table(box, max_exp_));
}

std::vector<std::vector<Interval>> make_power_table(std::span<const Interval> box, unsigned max_exp) {
  std::vector<std::vector<Interval>> t(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    t[i].reserve(max_exp + 1);
    for (unsigned e = 0; e <= max_exp; ++e) t[i].push_back(pow(box[i], e));
  }
  return t;
}

std::vector<std::vector<double>> make_power_table(std::span<const double> x, unsigned max_exp) {
  std::vector<std::vector<double>> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (unsigned e = 0; e <= max_exp; ++e) {
      t[i].push_back(p);
      p *= x[i];
    }
  }
  return t;
}

}  // namespace tnlab
