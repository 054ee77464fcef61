// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "gen.hpp"

#include "tnlab/catalog.hpp"
#include "tnlab/jet_engine.hpp"
#include "tnlab/symbil.hpp"
#include "tnlab/tangency.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace tnlab;

namespace {

PolyMap curve(std::vector<Polynomial> tail) {
  std::vector<Polynomial> c = {Polynomial::variable(1, 0)};
  c.insert(c.end(), tail.begin(), tail.end());
  return PolyMap(1, std::move(c));
}

Polynomial t1() { return Polynomial::variable(1, 0); }

}  // namespace

TEST_CASE("pair matrix of the parabola") {
  PolyMap f = curve({t1() * t1()});
  std::vector<double> x = {0.0}, y = {1.0};
  CHECK(pair_sigma_min(f, x, y) == doctest::Approx(std::sqrt(3.0 - std::sqrt(5.0))).epsilon(1e-12));
  Eigen::MatrixXd m = pair_matrix(MapJets(f), x, y);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 0) == 0.0);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 1) == 2.0);
}

TEST_CASE("cubic curve has parallel tangents at opposite points") {
  PolyMap f = curve({t1().pow(3)});
  CHECK(pair_sigma_min(f, std::vector<double>{1.0}, std::vector<double>{-1.0}) == doctest::Approx(0.0).scale(1.0));
  CHECK(pair_sigma_min(f, std::vector<double>{1.0}, std::vector<double>{-0.5}) > 0.1);
}

TEST_CASE("graphs of nonsingular quadratics are totally nonparallel at sampled pairs") {
  gen::Rng rng(31);
  PolyMap g = graph(to_quadratic(poly_mult(2)));
  MapJets jets(g);
  double worst = 1e300;
  for (int t = 0; t < 10000; ++t) {
    auto x = rng.point(2), y = rng.point(2);
    double s = pair_sigma_min(jets, x, y);
    double d = std::hypot(x[0] - y[0], x[1] - y[1]);
    worst = std::min(worst, s / std::max(d, 1e-12));
    CHECK(s > 0.0);
  }
  CHECK(worst > 0.0);
}

TEST_CASE("pair matrix columns are the two differentials") {
  gen::Rng rng(32);
  PolyMap f = rng.polymap(2, 5, 3);
  MapJets jets(f);
  auto x = rng.point(2), y = rng.point(2);
  Eigen::MatrixXd m = pair_matrix(jets, x, y);
  CHECK((m.leftCols(2) - jets.jet(x).d1).norm() == 0.0);
  CHECK((m.rightCols(2) - jets.jet(y).d1).norm() == 0.0);
  // the exact-rounded jets differ by rounding only
  CHECK((m.leftCols(2) - jet2(f, x).d1).norm() <= 1e-14 * (1 + m.norm()));
  CHECK((m.rightCols(2) - jet2(f, y).d1).norm() <= 1e-14 * (1 + m.norm()));
}

TEST_CASE("k-fold rank of the moment curve") {
  PolyMap f = get_example("moment-curve(3)");
  std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {2.0}};
  CHECK(kfold_rank(f, pts) == 3);
  std::vector<std::vector<double>> dup = {{0.0}, {0.0}};
  CHECK_THROWS(kfold_rank(f, dup));
  std::vector<Rational> xs = {0, 1, 2};
  CHECK(vandermonde_oracle(xs) == Rational(2));
  std::vector<Rational> ys = {1, 3, 4, 7};
  CHECK(vandermonde_oracle(ys) == Rational(2 * 3 * 6 * 1 * 4 * 3));
}

TEST_CASE("an ellipse has parallel tangents") {
  PolyMap loop = get_example("ellipse-loop");
  const int N = 1000;
  PolyMap vel = circle_derivative(loop, 1);
  std::vector<Eigen::Vector3d> tan(N);
  for (int i = 0; i < N; ++i) {
    double a = 2 * std::numbers::pi * i / N;
    std::vector<double> cs = {std::cos(a), std::sin(a)};
    for (int k = 0; k < 3; ++k) tan[i](k) = vel.components[k].eval_fast(cs);
  }
  double best = 1e300;
  int bi = 0, bj = 1;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      double r = tan[i].cross(tan[j]).norm();
      if (r < best) best = r, bi = i, bj = j;
    }
  }
  CHECK(best < 1e-6);
  double a = 2 * std::numbers::pi * bi / N, b = 2 * std::numbers::pi * bj / N;
  CHECK(skew_residual(loop, a, b) < 1e-6);
  CHECK(skew_residual(loop, 0.0, std::numbers::pi / 2) == doctest::Approx(2.0));
  CHECK_THROWS(skew_residual(loop, 1.0, 1.0));
}

TEST_CASE("double parallel on the cubic example") {
  PolyMap f = get_example("cubic-R3-R10");
  std::vector<double> x0 = {0, 0.5, 0}, y0 = {0, -0.5, 0};
  DoubleParallel d = double_parallel_witness(f, x0, y0);
  REQUIRE(d.converged);
  CHECK(d.residual < 1e-10);
  CHECK(std::fabs(std::fabs(d.u[0]) - 1.0) < 1e-8);
  CHECK(std::fabs(d.u[1]) < 1e-8);
  CHECK(std::fabs(d.u[2]) < 1e-8);
  CHECK(std::fabs(d.u[0] - d.v[0]) < 1e-8);
}

TEST_CASE("double parallel on the cubic curve") {
  PolyMap f = curve({t1().pow(3)});
  DoubleParallel d = double_parallel_witness(f, std::vector<double>{0.9}, std::vector<double>{-1.1});
  REQUIRE(d.converged);
  CHECK(std::fabs(d.x[0] + d.y[0]) < 1e-10);
  // the pair is determined up to sliding along y = -x; the seed's nearest point is (1, -1)
  CHECK(std::fabs(d.x[0] - 1.0) < 1e-10);
  CHECK(std::fabs(d.y[0] + 1.0) < 1e-10);
}

TEST_CASE("the parabola has no double parallels") {
  PolyMap f = curve({t1() * t1()});
  gen::Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    auto x = rng.point(1), y = rng.point(1);
    if (std::fabs(x[0] - y[0]) < 0.1) continue;
    DoubleParallel d = double_parallel_witness(f, x, y);
    CHECK_FALSE(d.converged);
    CHECK_FALSE(d.report.empty());
  }
}

TEST_CASE("double parallel residual vanishes at returned witnesses") {
  PolyMap f = get_example("quaternion-squaring");
  MapJets jets(f);
  std::vector<double> x0 = {0.1, 0.05, 0, 0}, y0 = {0, 0.9, 0.1, 0};
  DoubleParallel d = double_parallel_witness(jets, x0, y0);
  REQUIRE(d.converged);
  Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(d.u.data(), 4), v = Eigen::Map<Eigen::VectorXd>(d.v.data(), 4);
  Eigen::VectorXd r = jets.d1(d.x) * u - jets.d1(d.y) * v;
  CHECK(r.norm() < 1e-10);
  CHECK(u.norm() > 0.1);
}
