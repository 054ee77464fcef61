// SPDX-License-Identifier: Apache-2.0
#include "tnlab/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tnlab {

namespace {

bool is_int_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

mpz_class parse_int(std::string_view s) {
  if (!is_int_literal(s)) throw std::invalid_argument("malformed integer: " + std::string(s));
  std::string t(s);
  if (t[0] == '+') t.erase(0, 1);
  return mpz_class(t, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_int(trim(text.substr(0, slash)));
    mpz_class den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (is_int_literal(text)) return Rational(parse_int(text));

  // Decimal literal: mantissa[.fraction][e|E exponent]
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    std::string_view ex = text.substr(e + 1);
    if (!is_int_literal(ex)) throw std::invalid_argument("malformed exponent: " + std::string(text));
    exp10 = std::stol(std::string(ex));
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed decimal: " + std::string(text));
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) --exp10;
    } else {
      throw std::invalid_argument("malformed number: " + std::string(text));
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed number: " + std::string(text));
  mpz_class num(digits, 10);
  if (neg) num = -num;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite coefficient");
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

std::pair<double, double> enclose(const Rational& r) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double d = r.get_d();  // truncates toward zero
  int c = cmp(from_double(d), r);
  if (c == 0) return {d, d};
  if (c < 0) return {d, std::nextafter(d, inf)};
  return {std::nextafter(d, -inf), d};
}

double to_double_nearest(const Rational& r) {
  auto [lo, hi] = enclose(r);
  if (lo == hi) return lo;
  Rational dlo = r - from_double(lo);
  Rational dhi = from_double(hi) - r;
  int c = cmp(dlo, dhi);
  if (c < 0) return lo;
  if (c > 0) return hi;
  // tie: pick the even mantissa
  int e = 0;
  double m = std::frexp(lo, &e);
  double scaled = std::ldexp(m, 53);
  return std::fmod(scaled, 2.0) == 0.0 ? lo : hi;
}

}  // namespace tnlab
