// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "gen.hpp"

#include "tnlab/catalog.hpp"
#include "tnlab/certifier.hpp"
#include "tnlab/jet_engine.hpp"
#include "tnlab/symbil.hpp"
#include "tnlab/tangency.hpp"

#include <cmath>
#include <limits>

using namespace tnlab;

namespace {

Box cube(std::size_t n) { return Box::cube(n, -1, 1); }

// Dense sampling oracle: smallest pair_sigma_min over random pairs with
// 0 < |x - y| < rho inside the box.
double annulus_min(const PolyMap& f, double rho, int samples, std::uint64_t seed) {
  gen::Rng rng(seed);
  MapJets jets(f);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    auto x = rng.point(f.n);
    auto d = rng.unit(f.n);
    double r = rng.uniform(0.0, rho);
    std::vector<double> y = x;
    bool inside = r > 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
      y[i] += r * d[i];
      inside = inside && std::fabs(y[i]) <= 1.0;
    }
    if (!inside) continue;
    best = std::min(best, pair_sigma_min(jets, x, y));
  }
  return best;
}

}  // namespace

TEST_CASE("diagonal radius of quadratic graphs is unbounded") {
  for (const char* name : {"parabola", "complex-squaring", "poly-mult-graph(2)"}) {
    PolyMap f = get_example(name);
    DiagonalRadius d = diagonal_exclusion_radius(f, cube(f.n));
    CHECK(d.status == "ok");
    CHECK(d.C3 == 0.0);
    CHECK(std::isinf(d.rho));
    CHECK(d.c1 > 0.0);
    CHECK(d.c2 > 0.0);
  }
}

TEST_CASE("diagonal constant of the complex square is consistent with its bilinear bound") {
  PolyMap f = get_example("complex-squaring");
  DiagonalRadius d = diagonal_exclusion_radius(f, cube(2));
  Certificate nb = certify_nonsingular(complex_mult(2));
  REQUIRE(nb.verdict == Verdict::certified);
  // |P_N d^2 f(a, b)| <= |d^2 f(a, b)| = 2 |B(a, b)|
  CHECK(d.c2 <= 2.0 * nb.upper);
  CHECK(d.c2 > 0.0);
  TNCertificate c = certify_tn(f, cube(2));
  CHECK(c.rho == doctest::Approx(cube(2).diameter()));
}

TEST_CASE("finite diagonal radius for a cubic curve") {
  PolyMap f = get_example("moment-curve(3)");
  DiagonalRadius d = diagonal_exclusion_radius(f, cube(1));
  REQUIRE(d.status == "ok");
  CHECK(d.C3 > 0.0);
  CHECK(std::isfinite(d.rho));
  CHECK(d.rho > 0.0);
  CHECK(annulus_min(f, d.rho, 20000, 41) > 0.0);
}

TEST_CASE("flat points are not semifree") {
  DiagonalRadius d = diagonal_exclusion_radius(get_example("cubic-curve"), cube(1));
  CHECK(d.status == "not-semifree");
  CHECK(d.failure.has_value());
}

TEST_CASE("diagonal radius survives dense annulus sampling") {
  for (const char* name : {"parabola", "complex-squaring", "poly-mult-graph(2)"}) {
    PolyMap f = get_example(name);
    TNCertificate c = certify_tn(f, cube(f.n));
    REQUIRE(c.cert.verdict == Verdict::certified);
    CHECK(annulus_min(f, c.rho, 20000, 42) > 0.0);
  }
}

TEST_CASE("certified examples") {
  for (const char* name : {"parabola", "complex-squaring", "poly-mult-graph(2)", "moment-curve(3)"}) {
    PolyMap f = get_example(name);
    TNCertificate c = certify_tn(f, cube(f.n));
    CHECK(c.cert.verdict == Verdict::certified);
    CHECK(c.rho > 0.0);
    CHECK(c.offdiag_bound > 0.0);
    CHECK(c.offdiag_bound <= c.cert.upper);
  }
}

TEST_CASE("certified bound holds at sampled separated pairs") {
  PolyMap f = get_example("complex-squaring");
  TNCertificate c = certify_tn(f, cube(2));
  REQUIRE(c.cert.verdict == Verdict::certified);
  MapJets jets(f);
  gen::Rng rng(43);
  for (int s = 0; s < 5000; ++s) {
    auto x = rng.point(2), y = rng.point(2);
    if (std::hypot(x[0] - y[0], x[1] - y[1]) < c.rho) continue;
    CHECK(pair_sigma_min(jets, x, y) >= c.offdiag_bound * (1 - 1e-12));
  }
}

TEST_CASE("quaternion squaring is refuted by anticommutation") {
  PolyMap f = get_example("quaternion-squaring");
  TNCertificate c = certify_tn(f, cube(4));
  REQUIRE(c.cert.verdict == Verdict::refuted);
  REQUIRE(c.cert.witness);
  const Witness& w = *c.cert.witness;
  CHECK(w.kind == "double-parallel");
  CHECK(w.residual < 1e-10);
  MapJets jets(f);
  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(w.directions[0].data(), 4);
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(w.directions[1].data(), 4);
  CHECK((jets.d1(w.points[0]) * u - jets.d1(w.points[1]) * v).norm() < 1e-10);
  // x = 0, y = i, u = v = j up to sign
  CHECK(std::fabs(w.points[0][0]) + std::fabs(w.points[0][1]) + std::fabs(w.points[0][2]) + std::fabs(w.points[0][3]) < 1e-12);
  CHECK(std::fabs(std::fabs(w.points[1][1]) - 1.0) < 1e-12);
  CHECK(std::fabs(std::fabs(u(2)) - 1.0) < 1e-12);
  CHECK(std::fabs(u(2) - v(2)) < 1e-12);
}

TEST_CASE("the quartic graph is not refuted") {
  // a flat point is not a double parallel; the search may not conclude
  PolyMap f = get_example("quartic-R2-R4");
  TNCertificate c = certify_tn(f, cube(2), Budget{20000, 40, 60, 0});
  CHECK(c.cert.verdict != Verdict::refuted);
  CHECK(c.diagonal.status == "not-semifree");
}

TEST_CASE("graphs of singular quadratics are refuted with valid witnesses") {
  gen::Rng rng(44);
  int tried = 0, refuted = 0;
  for (int t = 0; t < 200 && tried < 10; ++t) {
    PolyMap q = rng.quadratic(2, 2);
    SymBilinearMap b = from_quadratic(q);
    if (certify_nonsingular(b).verdict != Verdict::refuted) continue;
    ++tried;
    PolyMap f = graph(q);
    TNCertificate c = certify_tn(f, cube(2), Budget{20000, 40, 60, 0});
    if (c.cert.verdict != Verdict::refuted) continue;
    ++refuted;
    const Witness& w = *c.cert.witness;
    if (w.kind != "double-parallel") continue;
    MapJets jets(f);
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(w.directions[0].data(), 2);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(w.directions[1].data(), 2);
    CHECK((jets.d1(w.points[0]) * u - jets.d1(w.points[1]) * v).norm() < 1e-9);
  }
  CHECK(tried == 10);
  CHECK(refuted == 10);
}

TEST_CASE("k-fold scan of the moment curve") {
  PolyMap f = get_example("moment-curve(3)");
  KFoldReport r = scan_kfold(f, Box({Interval(0, 1)}), 3, 10000, 7);
  CHECK(r.samples == 10000);
  CHECK(r.min_margin > 0.0);
  CHECK(r.below_tol == 0);
  KFoldReport again = scan_kfold(f, Box({Interval(0, 1)}), 3, 10000, 7);
  CHECK(again.min_margin == r.min_margin);
  CHECK_THROWS(scan_kfold(f, Box({Interval(0, 1)}), 4, 10, 7));
}

TEST_CASE("certify_tn rejects bad input") {
  PolyMap f = get_example("parabola");
  CHECK_THROWS(certify_tn(f, cube(2)));
  CHECK_THROWS(certify_tn(get_example("moment-curve(1)"), cube(1)));
}
