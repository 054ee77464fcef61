// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "gen.hpp"

#include "tnlab/json_io.hpp"
#include "tnlab/skew.hpp"
#include "tnlab/tangency.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

using namespace tnlab;

namespace {

json fixture() {
  std::ifstream f(std::string(TNLAB_TEST_DATA) + "/skew_loop_seed0_deg4.json");
  REQUIRE(f.good());
  return json::parse(f);
}

}  // namespace

TEST_CASE("the circle is not skew") {
  for (int d : {1, 2, 4}) {
    TrigLoop c = TrigLoop::circle(d);
    CHECK(skew_margin(c) <= 0.0);
    CHECK(sampled_pair_margin(c, 64) <= 1e-12);
  }
  CHECK_THROWS(TrigLoop::circle(0));
}

TEST_CASE("loop derivatives agree with the polynomial form") {
  gen::Rng rng(71);
  TrigLoop l = TrigLoop::circle(3);
  for (int k = 0; k < l.coeffs.cols(); ++k) {
    for (int d = 0; d < 3; ++d) l.coeffs(d, k) += 0.3 * rng.normal();
  }
  PolyMap p = l.to_polymap();
  CHECK(p.domain == DomainKind::circle);
  PolyMap v = circle_derivative(p, 1), a = circle_derivative(p, 2);
  for (int s = 0; s < 50; ++s) {
    double t = rng.uniform(0, 2 * std::numbers::pi);
    std::vector<double> cs = {std::cos(t), std::sin(t)};
    Eigen::Vector3d lv = l.velocity(t), la = l.acceleration(t);
    for (int k = 0; k < 3; ++k) {
      CHECK(v.components[k].eval_fast(cs) == doctest::Approx(lv(k)).epsilon(1e-10));
      CHECK(a.components[k].eval_fast(cs) == doctest::Approx(la(k)).epsilon(1e-10));
    }
    double u = rng.uniform(0, 2 * std::numbers::pi);
    if (std::fabs(std::remainder(t - u, 2 * std::numbers::pi)) < 1e-3) continue;
    CHECK(skew_residual(p, t, u) == doctest::Approx(lv.cross(l.velocity(u)).norm()).epsilon(1e-9));
  }
}

TEST_CASE("search history is monotone") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SkewSearch s = search_skew(3, 300, seed, Budget{2000, 30, 30, 0});
    REQUIRE(s.history.size() == 300);
    for (std::size_t i = 1; i < s.history.size(); ++i) CHECK(s.history[i] >= s.history[i - 1]);
    CHECK(s.margin == s.history.back());
    CHECK(s.initial_margin <= 0.0);
  }
}

TEST_CASE("recorded skew loop has a positive margin on a million pairs") {
  TrigLoop l = trigloop_from_json(fixture());
  CHECK(l.degree == 4);
  CHECK(sampled_pair_margin(l, 1000) > 0.0);
  CHECK(skew_margin(l) > 0.0);
  SkewCertificate c = certify_skew(l, Budget{20000, 40, 60, 0});
  CHECK(c.kappa_lower > 0.0);
  CHECK(c.cert.verdict != Verdict::refuted);
}

TEST_CASE("search with seed 0 reproduces the recorded loop") {
  json fx = fixture();
  SkewSearch s = search_skew(4, 10000, 0, Budget{2000, 30, 30, 0});
  TrigLoop want = trigloop_from_json(fx);
  CHECK((s.best.coeffs - want.coeffs).norm() < 1e-12);
  CHECK(s.margin == doctest::Approx(fx["margin"].get<double>()).epsilon(1e-12));
  CHECK(s.margin > 0.0);
}
