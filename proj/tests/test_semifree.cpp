// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "gen.hpp"

#include "tnlab/catalog.hpp"
#include "tnlab/semifree.hpp"
#include "tnlab/symbil.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace tnlab;

namespace {

Eigen::VectorXd sff_apply(const SFFData& s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(s.projected.size()));
  for (std::size_t k = 0; k < s.projected.size(); ++k) r(static_cast<Eigen::Index>(k)) = a.dot(s.projected[k] * b);
  return r;
}

PolyMap cubic_without_cubic_terms() {
  PolyMap f = get_example("cubic-R3-R10");
  std::vector<Polynomial> c(f.components.begin(), f.components.begin() + 7);
  return PolyMap(3, std::move(c));
}

double off_axis(const std::vector<double>& x) {
  std::vector<double> a = {std::fabs(x[0]), std::fabs(x[1]), std::fabs(x[2])};
  std::sort(a.begin(), a.end());
  return a[1];  // the two smaller coordinates must vanish on an axis
}

}  // namespace

TEST_CASE("normal projector invariants") {
  gen::Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    PolyMap f = graph(rng.polymap(2, 3, 3));
    auto x = rng.point(2);
    SFFData s = second_fundamental_form(f, x);
    const Eigen::MatrixXd& P = s.projector;
    CHECK((P * P - P).norm() < 1e-12);
    CHECK((P - P.transpose()).norm() < 1e-12);
    CHECK((P * s.frame).norm() < 1e-12);
    CHECK(s.normal.cols() == 3);
    CHECK((s.normal.transpose() * s.normal - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
    for (std::size_t k = 0; k < s.projected.size(); ++k) CHECK((s.projected[k] - s.projected[k].transpose()).norm() == 0.0);
    CHECK(s.form.p == 3);
    s.form.validate();
  }
}

TEST_CASE("the cubic example fails semifreedom only in the mixed direction at the origin") {
  PolyMap f = get_example("cubic-R3-R10");
  SFFData s = second_fundamental_form(f, std::vector<double>{0, 0, 0});
  Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  CHECK(sff_apply(s, I.col(0), I.col(1)).norm() < 1e-15);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      if (i == 0 && j == 1) continue;
      CHECK(sff_apply(s, I.col(i), I.col(j)).norm() > 0.1);
    }
  }
  // the kernel is exactly the pair (e1, e2): random unit pairs stay away from zero
  gen::Rng rng(52);
  for (int t = 0; t < 1000; ++t) {
    auto a = rng.unit(3), b = rng.unit(3);
    Eigen::Vector3d va(a[0], a[1], a[2]), vb(b[0], b[1], b[2]);
    double dist = std::min((va.cross(I.col(0))).norm() + (vb.cross(I.col(1))).norm(),
                           (va.cross(I.col(1))).norm() + (vb.cross(I.col(0))).norm());
    if (dist < 0.2) continue;
    CHECK(sff_apply(s, va, vb).norm() > 1e-3);
  }
}

TEST_CASE("graph of a nonsingular quadratic is semifree") {
  PolyMap f = graph(to_quadratic(poly_mult(2)));
  SemifreeCertificate c = certify_semifree(f, Box::cube(2, -1, 1));
  CHECK(c.cert.verdict == Verdict::certified);
  CHECK(c.cert.bound > 0.0);
  CHECK(c.complete);
  CHECK(c.failures.empty());
  CHECK_FALSE(c.image_check.discrepancy);
}

TEST_CASE("the cubic example is refuted at the origin") {
  PolyMap f = get_example("cubic-R3-R10");
  SemifreeCertificate c = certify_semifree(f, Box::cube(3, -1, 1));
  REQUIRE(c.cert.verdict == Verdict::refuted);
  REQUIRE(c.cert.witness);
  const auto& x = c.cert.witness->points[0];
  CHECK(std::hypot(x[0], x[1], x[2]) < 1e-6);
}

TEST_CASE("cubic singularity check") {
  CubicReport r = cubic_singularity_check(get_example("cubic-R3-R10"), std::vector<double>{0, 0, 0});
  CHECK(r.verdict == "cubic");
  CHECK(r.isolated);
  CHECK(r.mixed);
  CHECK(r.restored_semifree);
  CHECK(r.independent);

  // the pure direction of a flat point on a curve is excluded
  PolyMap curve(1, {Polynomial::variable(1, 0), Polynomial::variable(1, 0).pow(3)});
  CubicReport c = cubic_singularity_check(curve, std::vector<double>{0});
  CHECK(c.verdict == "non-cubic");
  CHECK_FALSE(c.mixed);

  // without the cubic components the independence condition fails
  CubicReport d = cubic_singularity_check(cubic_without_cubic_terms(), std::vector<double>{0, 0, 0});
  CHECK(d.verdict == "non-cubic");
  CHECK_FALSE(d.independent);

  // at a semifree point there is nothing to classify
  CubicReport e = cubic_singularity_check(get_example("cubic-R3-R10"), std::vector<double>{0.5, 0.5, 0.5});
  CHECK(e.verdict != "cubic");
}

TEST_CASE("trace of the cubic curve's double parallels") {
  PolyMap f(1, {Polynomial::variable(1, 0), Polynomial::variable(1, 0).pow(3)});
  TraceOptions o;
  o.box = Box::cube(1, -1, 1);
  TraceResult r = trace_sigma(f, std::vector<double>{0.5}, std::vector<double>{-0.5}, 100, 0.05, o);
  REQUIRE(r.status == "ok");
  CHECK(r.locus_dimension == 1);
  CHECK(r.nodes.size() > 10);
  for (const auto& nd : r.nodes) {
    CHECK(std::fabs(nd.x[0] + nd.y[0]) < 1e-9);
    CHECK(nd.residual < 1e-9);
  }
}

TEST_CASE("trace of the cubic example recovers both axes") {
  PolyMap f = get_example("cubic-R3-R10");
  TraceOptions o;
  o.box = Box::cube(3, -1, 1);
  for (int axis : {0, 1}) {
    std::vector<double> x0(3, 0.0), y0(3, 0.0);
    x0[static_cast<std::size_t>(axis)] = 0.3;
    y0[static_cast<std::size_t>(axis)] = -0.3;
    TraceResult r = trace_sigma(f, x0, y0, 100, 0.02, o);
    REQUIRE(r.status == "ok");
    CHECK(r.nodes.size() > 20);
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      CHECK(r.nodes[i].residual < 1e-9);
      CHECK(off_axis(r.projection[i]) < 1e-6);
      double t = std::fabs(r.projection[i][static_cast<std::size_t>(axis)]);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    CHECK(lo < 0.05);
    CHECK(hi > 0.9);
  }
}

TEST_CASE("tracing from a pair without double parallels reports an empty locus") {
  PolyMap f(1, {Polynomial::variable(1, 0), Polynomial::variable(1, 0).pow(2)});
  TraceResult r = trace_sigma(f, std::vector<double>{0.5}, std::vector<double>{-0.5}, 10, 0.05);
  CHECK(r.status == "empty");
}
