// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "gen.hpp"

#include "tnlab/symbil.hpp"

#include <cmath>

using namespace tnlab;

namespace {

PolyMap complex_square() {
  Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  return PolyMap(2, {x * x - y * y, Rational(2) * x * y});
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

// Brute-force min of |B(x,y)| over unit pairs on a grid of angles (n = 2 only).
double grid_min_n2(const SymBilinearMap& b, int m) {
  double best = 1e300;
  for (int i = 0; i < m; ++i) {
    double a = M_PI * i / m;
    std::vector<double> x = {std::cos(a), std::sin(a)};
    for (int j = 0; j < m; ++j) {
      double c = 2 * M_PI * j / m;
      std::vector<double> y = {std::cos(c), std::sin(c)};
      best = std::min(best, norm(apply(b, x, y)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("polynomial multiplication values") {
  SymBilinearMap b = poly_mult(3);
  CHECK(b.p == 5);
  std::vector<Rational> one = {1, 1, 1};
  auto v = apply(b, one, one);
  std::vector<Rational> expect = {1, 2, 3, 2, 1};
  CHECK(v == expect);

  SymBilinearMap b2 = poly_mult(2);
  std::vector<Rational> x = {1, 2}, y = {3, 4};
  std::vector<Rational> e2 = {3, 10, 8};
  CHECK(apply(b2, x, y) == e2);
  CHECK(poly_mult(1).p == 1);
  CHECK_THROWS(poly_mult(0));
}

TEST_CASE("complex multiplication") {
  CHECK(complex_mult(2).p == 2);
  CHECK(complex_mult(4).p == 6);
  CHECK_THROWS(complex_mult(3));
  SymBilinearMap b = complex_mult(2);
  gen::Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    auto x = rng.point(2), y = rng.point(2);
    CHECK(norm(apply(b, x, y)) == doctest::Approx(norm(x) * norm(y)).epsilon(1e-12));
  }
}

TEST_CASE("polarization of the complex square") {
  SymBilinearMap b = from_quadratic(complex_square());
  SymBilinearMap c = complex_mult(2);
  gen::Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    auto u = rng.rational_point(2), v = rng.rational_point(2);
    CHECK(apply(b, u, v) == apply(c, u, v));
  }
  // B(u,v) = (Q(u+v) - Q(u) - Q(v)) / 2 coefficientwise
  PolyMap q = complex_square();
  for (int t = 0; t < 50; ++t) {
    auto u = rng.rational_point(2), v = rng.rational_point(2);
    std::vector<Rational> s = {u[0] + v[0], u[1] + v[1]};
    auto qs = eval_exact(q, s), qu = eval_exact(q, u), qv = eval_exact(q, v);
    auto bu = apply(b, u, v);
    for (std::size_t k = 0; k < 2; ++k) CHECK(bu[k] == (qs[k] - qu[k] - qv[k]) / 2);
  }
}

TEST_CASE("the n = 2 multiplication quadratic polarizes to degree-one polynomial multiplication") {
  Polynomial x0 = Polynomial::variable(2, 0), x1 = Polynomial::variable(2, 1);
  PolyMap q(2, {x0 * x0, Rational(2) * x0 * x1, x1 * x1});
  SymBilinearMap b = from_quadratic(q);
  SymBilinearMap m = poly_mult(2);
  CHECK(b.coeffs == m.coeffs);
  CHECK(to_quadratic(m).components == q.components);
}

TEST_CASE("bilinearity and symmetry hold exactly") {
  gen::Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    SymBilinearMap b = from_quadratic(rng.quadratic(3, 2));
    b.validate();
    auto x = rng.rational_point(3), xp = rng.rational_point(3), y = rng.rational_point(3);
    Rational a = rng.rational(), c = rng.rational();
    std::vector<Rational> comb(3);
    for (std::size_t i = 0; i < 3; ++i) comb[i] = a * x[i] + c * xp[i];
    auto lhs = apply(b, comb, y);
    auto r1 = apply(b, x, y), r2 = apply(b, xp, y);
    for (std::size_t k = 0; k < 2; ++k) CHECK(lhs[k] == a * r1[k] + c * r2[k]);
    CHECK(apply(b, x, y) == apply(b, y, x));
  }
  SymBilinearMap bad(2, 1);
  bad.coeffs[1] = 1;  // (0,1) without (1,0)
  CHECK_THROWS(bad.validate());
}

TEST_CASE("symmetric Segre coordinates") {
  std::vector<Rational> x = {1, 0}, y = {0, 1};
  std::vector<Rational> e = {0, 1, 0};
  CHECK(symmetric_segre(x, y) == e);
  std::vector<Rational> z = {0, 0};
  CHECK_THROWS(symmetric_segre(z, y));
  gen::Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    SymBilinearMap b = from_quadratic(rng.quadratic(3, 2));
    auto u = rng.rational_point(3), v = rng.rational_point(3);
    u[0] = u[0] == 0 ? Rational(1) : u[0];
    v[1] = v[1] == 0 ? Rational(1) : v[1];
    auto s = symmetric_segre(u, v);
    auto l = segre_form(b);
    auto direct = apply(b, u, v);
    for (std::size_t k = 0; k < b.p; ++k) {
      Rational acc = 0;
      for (std::size_t i = 0; i < s.size(); ++i) acc += l[k][i] * s[i];
      CHECK(acc == direct[k]);
    }
  }
}

TEST_CASE("hyperdeterminant") {
  CHECK(hyperdet(from_quadratic(complex_square())) == Rational(-64));
  // real squares are singular: (x^2, y^2) has B(e1, e2) = 0
  Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  SymBilinearMap d = from_quadratic(PolyMap(2, {x * x, y * y}));
  CHECK(hyperdet(d) > 0);
  CHECK(certify_nonsingular(d).verdict == Verdict::refuted);
}

TEST_CASE("negative hyperdeterminant forces nonsingularity") {
  gen::Rng rng(25);
  int found = 0;
  for (int t = 0; t < 2000 && found < 100; ++t) {
    SymBilinearMap b = from_quadratic(rng.quadratic(2, 2));
    if (hyperdet(b) >= 0) continue;
    ++found;
    CHECK(certify_nonsingular(b).verdict == Verdict::certified);
  }
  CHECK(found == 100);
}

TEST_CASE("nonsingularity certifier") {
  Certificate c = certify_nonsingular(poly_mult(3));
  CHECK(c.verdict == Verdict::certified);
  CHECK(c.bound > 0.0);

  Certificate c2 = certify_nonsingular(poly_mult(2));
  REQUIRE(c2.verdict == Verdict::certified);
  // the certified bound may not exceed a brute-force minimum over unit pairs
  CHECK(c2.bound <= grid_min_n2(poly_mult(2), 1000) + 1e-12);
  CHECK(c2.bound <= c2.upper);

  Certificate cm = certify_nonsingular(complex_mult(2));
  REQUIRE(cm.verdict == Verdict::certified);
  CHECK(cm.bound <= 1.0 + 1e-12);

  // a scalar form on R^2 always has an isotropic pair
  gen::Rng rng(26);
  for (int t = 0; t < 20; ++t) {
    SymBilinearMap b = from_quadratic(rng.quadratic(2, 1));
    Certificate r = certify_nonsingular(b);
    REQUIRE(r.verdict == Verdict::refuted);
    REQUIRE(r.witness);
    const auto& w = *r.witness;
    CHECK(verify_singular_witness(b, w.points[0], w.points[1], 1e-9));
  }
}

TEST_CASE("certified bound holds on random unit pairs") {
  gen::Rng rng(27);
  for (int t = 0; t < 10; ++t) {
    SymBilinearMap b = random_gaussian(2, 3, 100 + t);
    Certificate c = certify_nonsingular(b);
    if (c.verdict != Verdict::certified) continue;
    for (int s = 0; s < 2000; ++s) {
      auto x = rng.unit(2), y = rng.unit(2);
      CHECK(norm(apply(b, x, y)) >= c.bound * (1 - 1e-12));
    }
  }
}

TEST_CASE("codimension formulas") {
  CHECK(codim_sigma(2, 3) == 1);
  CHECK(codim_sigma(3, 4) == 0);
  CHECK(codim_sigma(2, 1) == -1);
  CHECK(corank_codim(4, 7, 1) == 4);
  CHECK(corank_codim(4, 8 - 1, 1) == (7 - 4 + 1) * 1);
}

TEST_CASE("small strata samples") {
  StrataSample s = sample_strata(2, 1, 20, 0);
  CHECK(s.refuted == 20);
  CHECK(s.witnesses_verified == 20);
  StrataSample c = sample_strata(2, 3, 50, 0);
  CHECK(c.certified >= 49);
  StrataSample a = sample_strata(2, 3, 50, 0);
  CHECK(a.certified == c.certified);
  for (std::size_t i = 0; i < a.certificates.size(); ++i) CHECK(a.certificates[i].bound == c.certificates[i].bound);
}

TEST_CASE("random gaussian maps are seeded") {
  SymBilinearMap a = random_gaussian(3, 2, 5), b = random_gaussian(3, 2, 5), c = random_gaussian(3, 2, 6);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.coeffs != c.coeffs);
  a.validate();
}
