// SPDX-License-Identifier: Apache-2.0
#include "tnlab/catalog.hpp"

#include "tnlab/symbil.hpp"

#include "tnlab/bounds_data.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tnlab {

namespace {

Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial cst(std::size_t n, const Rational& c) { return Polynomial::constant(n, c); }

// "name(k)" -> ("name", k)
std::pair<std::string, std::optional<int>> split_param(const std::string& s) {
  auto open = s.find('(');
  if (open == std::string::npos) return {s, std::nullopt};
  if (s.back() != ')') throw std::invalid_argument("malformed registry name: " + s);
  std::string arg = s.substr(open + 1, s.size() - open - 2);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(arg, &used);
  } catch (...) {
    throw std::invalid_argument("malformed registry parameter: " + s);
  }
  if (used != arg.size()) throw std::invalid_argument("malformed registry parameter: " + s);
  return {s.substr(0, open), v};
}

PolyMap cubic_r3(bool with_cubic) {
  std::size_t n = 3;
  Polynomial x1 = var(n, 0), x2 = var(n, 1), x3 = var(n, 2);
  Rational half(1, 2);
  std::vector<Polynomial> c = {x1, x2, x3, half * x1 * x1, half * x2 * x2 + x1 * x3, x2 * x3, half * x3 * x3};
  if (with_cubic) {
    c.push_back(x1 * x1 * x2);
    c.push_back(x1 * x2 * x2);
    c.push_back(x1 * x2 * x3);
  }
  return PolyMap(n, std::move(c));
}

PolyMap quartic_tail() {
  Polynomial x = var(2, 0), y = var(2, 1);
  return PolyMap(2, {x.pow(4) - y.pow(4), x.pow(3) * y + x * y.pow(3)});
}

PolyMap loop(const Rational& a, const Rational& b) {
  Polynomial c = var(2, 0), s = var(2, 1);
  return PolyMap(2, {a * c, b * s, Polynomial(2)}, CoeffMode::rational, DomainKind::circle);
}

}  // namespace

std::vector<std::string> registry_names() {
  return {"parabola",          "cubic-curve",         "complex-squaring", "quaternion-squaring",
          "poly-mult-graph(n)", "complex-mult-graph(n)", "moment-curve(k)", "cubic-R3-R10",
          "cubic-R3-R7",       "quartic-R2-R4",       "circle-loop",      "ellipse-loop"};
}

PolyMap get_example(const std::string& name) {
  auto [base, arg] = split_param(name);
  auto need = [&](int lo) {
    if (!arg) throw std::invalid_argument(base + " requires a parameter, e.g. " + base + "(3)");
    if (*arg < lo) throw std::invalid_argument(base + ": parameter out of range");
    return static_cast<std::size_t>(*arg);
  };
  auto none = [&] {
    if (arg) throw std::invalid_argument(base + " takes no parameter");
  };
  if (base == "parabola") {
    none();
    return PolyMap(1, {var(1, 0), var(1, 0).pow(2)});
  }
  if (base == "cubic-curve") {
    none();
    return PolyMap(1, {var(1, 0), var(1, 0).pow(3)});
  }
  if (base == "complex-squaring") {
    none();
    Polynomial x = var(2, 0), y = var(2, 1);
    return graph(PolyMap(2, {x * x - y * y, Rational(2) * x * y}));
  }
  if (base == "quaternion-squaring") {
    none();
    Polynomial a = var(4, 0), b = var(4, 1), c = var(4, 2), d = var(4, 3);
    Rational two(2);
    return graph(PolyMap(4, {a * a - b * b - c * c - d * d, two * a * b, two * a * c, two * a * d}));
  }
  if (base == "poly-mult-graph") return graph(to_quadratic(poly_mult(need(1))));
  if (base == "complex-mult-graph") {
    std::size_t n = need(2);
    if (n % 2 != 0) throw std::invalid_argument("complex-mult-graph: n must be even");
    return graph(to_quadratic(complex_mult(n)));
  }
  if (base == "moment-curve") {
    std::size_t k = need(1);
    std::vector<Polynomial> c;
    for (std::size_t e = 1; e <= k; ++e) c.push_back(var(1, 0).pow(static_cast<unsigned>(e)));
    return PolyMap(1, std::move(c));
  }
  if (base == "cubic-R3-R10") {
    none();
    return cubic_r3(true);
  }
  if (base == "cubic-R3-R7") {
    none();
    return cubic_r3(false);
  }
  if (base == "quartic-R2-R4") {
    none();
    return graph(quartic_tail());
  }
  if (base == "circle-loop") {
    none();
    return loop(1, 1);
  }
  if (base == "ellipse-loop") {
    none();
    return loop(2, 1);
  }
  throw std::invalid_argument("unknown registry name: " + name);
}

BoundsRow tn_bounds(int n) {
  if (n < 1) throw std::invalid_argument("tn_bounds: n must be at least 1");
  BoundsRow r;
  r.n = n;
  if (n <= 2) {
    r.upper = 2 * n;
    r.upper_provenance = "exact";
  } else if (n % 2 == 1) {
    r.upper = 3 * n - 1;
    r.upper_provenance = "3n-1";
  } else {
    r.upper = 3 * n - 2;
    r.upper_provenance = "3n-2";
  }
  std::istringstream in(generated::kLowerBoundsCsv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
    int rn = 0, lower = 0, exact = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> rn >> c1 >> lower >> c2 >> exact)) continue;
    if (rn == n) {
      r.lower = lower;
      r.exact = exact != 0;
      r.lower_provenance = "table";
    }
  }
  if (!r.lower) r.lower_provenance = "unavailable";
  return r;
}

std::vector<BoundsRow> tn_table() {
  std::vector<BoundsRow> rows;
  for (int n = 1; n <= 17; ++n) rows.push_back(tn_bounds(n));
  return rows;
}

std::string tn_table_csv() {
  std::ostringstream os;
  os << "n,lower,upper,exact,lower_provenance,upper_provenance\n";
  for (const auto& r : tn_table()) {
    os << r.n << ',' << (r.lower ? std::to_string(*r.lower) : "") << ',' << r.upper << ',' << (r.exact ? 1 : 0) << ','
       << r.lower_provenance << ',' << r.upper_provenance << '\n';
  }
  return os.str();
}

namespace {

// Determinant of a square polynomial matrix by Laplace expansion along the first row.
Polynomial det(const std::vector<std::vector<Polynomial>>& m, std::size_t nvars) {
  std::size_t k = m.size();
  if (k == 0) return cst(nvars, 1);
  if (k == 1) return m[0][0];
  Polynomial s(nvars);
  for (std::size_t c = 0; c < k; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t cc = 0; cc < k; ++cc) {
        if (cc != c) row.push_back(m[r][cc]);
      }
      minor.push_back(std::move(row));
    }
    Polynomial t = m[0][c] * det(minor, nvars);
    if (c % 2 == 0) {
      s += t;
    } else {
      s -= t;
    }
  }
  return s;
}

// Jacobian of the quartic tail, in variables (a1, a2, b1, b2), at a (offset 0) or b (offset 2).
std::vector<std::vector<Polynomial>> quartic_jacobian(std::size_t offset) {
  PolyMap g = quartic_tail();
  std::vector<Polynomial> sub = {var(4, offset), var(4, offset + 1)};
  std::vector<std::vector<Polynomial>> j(2, std::vector<Polynomial>(2, Polynomial(4)));
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 2; ++i) j[k][i] = g.components[k].derivative(i).substitute(sub);
  }
  return j;
}

bool vandermonde(std::size_t k) {
  std::vector<std::vector<Polynomial>> m(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t e = 0; e < k; ++e) m[i].push_back(var(k, i).pow(static_cast<unsigned>(e)));
  }
  Polynomial prod = cst(k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) prod = prod * (var(k, j) - var(k, i));
  }
  return (det(m, k) - prod).is_zero();
}

Polynomial first_factor() {
  Polynomial a1 = var(4, 0), a2 = var(4, 1), b1 = var(4, 2), b2 = var(4, 3);
  return a1 * a1 + a1 * b1 + b1 * b1 + a2 * a2 + a2 * b2 + b2 * b2;
}

Polynomial second_factor() {
  Polynomial a1 = var(4, 0), a2 = var(4, 1), b1 = var(4, 2), b2 = var(4, 3);
  Polynomial d = (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2);
  Polynomial e = a1 * a1 + a2 * a2 - b1 * b1 - b2 * b2;
  return d * d + Rational(3) * e * e;
}

bool quartic_factorization() {
  auto ja = quartic_jacobian(0), jb = quartic_jacobian(2);
  std::vector<std::vector<Polynomial>> diff(2, std::vector<Polynomial>(2, Polynomial(4)));
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) diff[r][c] = ja[r][c] - jb[r][c];
  }
  return (det(diff, 4) - first_factor() * second_factor()).is_zero();
}

bool quartic_hyperdet() {
  PolyMap g = quartic_tail();
  auto d2 = [&](std::size_t k, std::size_t i, std::size_t j) { return g.components[k].derivative(i).derivative(j); };
  Polynomial fxx = d2(0, 0, 0), fxy = d2(0, 0, 1), fyy = d2(0, 1, 1);
  Polynomial gxx = d2(1, 0, 0), gxy = d2(1, 0, 1), gyy = d2(1, 1, 1);
  Polynomial a = fxx * gyy - fyy * gxx;
  Polynomial hd = a * a - Rational(4) * (fxx * gxy - fxy * gxx) * (fxy * gyy - fyy * gxy);
  // the displayed form (72x^3y + 72xy^3)^2 - 4(36x^4 + 36x^2y^2)(36x^2y^2 + 36y^4)
  Polynomial x = var(2, 0), y = var(2, 1);
  Polynomial p = Rational(72) * x.pow(3) * y + Rational(72) * x * y.pow(3);
  Polynomial lit = p * p - Rational(4) * (Rational(36) * x.pow(4) + Rational(36) * x * x * y * y) *
                               (Rational(36) * x * x * y * y + Rational(36) * y.pow(4));
  return hd.is_zero() && lit.is_zero();
}

}  // namespace

std::vector<std::string> identity_names() {
  return {"quartic-det-factorization", "quartic-hyperdet-zero", "vandermonde-product"};
}

bool polynomial_identity_check(const std::string& name) {
  auto [base, arg] = split_param(name);
  if (base == "quartic-det-factorization" && !arg) return quartic_factorization();
  if (base == "quartic-hyperdet-zero" && !arg) return quartic_hyperdet();
  if (base == "vandermonde-product") {
    int k = arg.value_or(4);
    if (k < 1 || k > 7) throw std::invalid_argument("vandermonde-product: size must be between 1 and 7");
    return vandermonde(static_cast<std::size_t>(k));
  }
  throw std::invalid_argument("unknown identity: " + name);
}

QuarticProof quartic_tn_proof() {
  QuarticProof p;
  p.factorization = quartic_factorization();
  Polynomial a1 = var(4, 0), a2 = var(4, 1), b1 = var(4, 2), b2 = var(4, 3);
  Polynomial sos = Rational(1, 2) * ((a1 + b1) * (a1 + b1) + a1 * a1 + b1 * b1 + (a2 + b2) * (a2 + b2) + a2 * a2 + b2 * b2);
  p.first_factor_sos = (first_factor() - sos).is_zero();
  // F2 is written as d^2 + 3 e^2 with d = |a - b|^2; it vanishes only when a = b
  Polynomial d = (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2);
  Polynomial e = a1 * a1 + a2 * a2 - b1 * b1 - b2 * b2;
  p.second_factor_sos = (second_factor() - (d * d + Rational(3) * e * e)).is_zero();
  p.hyperdet_zero = quartic_hyperdet();
  return p;
}

}  // namespace tnlab
