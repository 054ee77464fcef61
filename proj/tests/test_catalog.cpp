// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "tnlab/catalog.hpp"
#include "tnlab/polymap.hpp"

#include <algorithm>
#include <sstream>
#include <string>

using namespace tnlab;

namespace {

// Published bounds, rows n = 1..17.
const int kLower[17] = {2, 4, 7, 8, 13, 14, 15, 16, 25, 26, 28, 29, 32, 37, 38, 39, 49};
const int kUpper[17] = {2, 4, 8, 10, 14, 16, 20, 22, 26, 28, 32, 34, 38, 40, 44, 46, 50};

Polynomial x(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }

}  // namespace

TEST_CASE("registry names resolve") {
  auto names = registry_names();
  for (const char* want : {"parabola", "cubic-curve", "complex-squaring", "quaternion-squaring", "cubic-R3-R10",
                           "quartic-R2-R4", "ellipse-loop"}) {
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  }
  for (const auto& n : names) {
    if (n.find('(') != std::string::npos) continue;
    CHECK_NOTHROW(get_example(n).validate());
  }
  CHECK_THROWS_AS(get_example("no-such-map"), std::invalid_argument);
  CHECK_THROWS(get_example("complex-mult-graph(3)"));
  CHECK(get_example("poly-mult-graph(4)").q == 4 + 7);
  CHECK(get_example("complex-mult-graph(4)").q == 4 + 6);
}

TEST_CASE("the cubic example coefficientwise") {
  PolyMap f = get_example("cubic-R3-R10");
  REQUIRE(f.n == 3);
  REQUIRE(f.q == 10);
  Rational h(1, 2);
  std::vector<Polynomial> want = {
      x(3, 0),
      x(3, 1),
      x(3, 2),
      h * x(3, 0) * x(3, 0),
      h * x(3, 1) * x(3, 1) + x(3, 0) * x(3, 2),
      x(3, 1) * x(3, 2),
      h * x(3, 2) * x(3, 2),
      x(3, 0) * x(3, 0) * x(3, 1),
      x(3, 0) * x(3, 1) * x(3, 1),
      x(3, 0) * x(3, 1) * x(3, 2),
  };
  for (std::size_t k = 0; k < 10; ++k) CHECK(f.components[k] == want[k]);
}

TEST_CASE("the quartic graph and the moment curve") {
  PolyMap f = get_example("quartic-R2-R4");
  REQUIRE(f.q == 4);
  CHECK(f.is_graph());
  CHECK(f.components[2] == x(2, 0).pow(4) - x(2, 1).pow(4));
  CHECK(f.components[3] == x(2, 0).pow(3) * x(2, 1) + x(2, 0) * x(2, 1).pow(3));

  PolyMap m = get_example("moment-curve(3)");
  REQUIRE(m.q == 3);
  for (unsigned k = 0; k < 3; ++k) CHECK(m.components[k] == x(1, 0).pow(k + 1));
}

TEST_CASE("bounds rows") {
  BoundsRow r3 = tn_bounds(3);
  CHECK(*r3.lower == 7);
  CHECK(r3.upper == 8);
  BoundsRow r8 = tn_bounds(8);
  CHECK(*r8.lower == 16);
  CHECK(r8.upper == 22);
  BoundsRow r13 = tn_bounds(13);
  CHECK(*r13.lower == 32);
  CHECK(r13.upper == 38);
  BoundsRow r20 = tn_bounds(20);
  CHECK_FALSE(r20.lower.has_value());
  CHECK(r20.upper == 58);
  CHECK_THROWS(tn_bounds(0));
}

TEST_CASE("table reproduces the bounds table") {
  auto rows = tn_table();
  REQUIRE(rows.size() == 17);
  for (int i = 0; i < 17; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    CHECK(r.n == i + 1);
    REQUIRE(r.lower.has_value());
    CHECK(*r.lower == kLower[i]);
    CHECK(r.upper == kUpper[i]);
    CHECK(*r.lower <= r.upper);
    int n = r.n;
    if (n <= 2) {
      CHECK(r.exact);
      CHECK(r.upper == 2 * n);
    } else {
      CHECK_FALSE(r.exact);
      CHECK(r.upper == (n % 2 ? 3 * n - 1 : 3 * n - 2));
    }
  }
  std::istringstream csv(tn_table_csv());
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 18);
}

TEST_CASE("lower bounds jump after powers of two") {
  auto rows = tn_table();
  for (int n : {9, 17}) CHECK(*rows[n - 1].lower - *rows[n - 2].lower >= 8);
}

TEST_CASE("exact identities") {
  auto names = identity_names();
  CHECK(names.size() >= 3);
  for (const auto& n : names) CHECK_MESSAGE(polynomial_identity_check(n), n);
  CHECK(polynomial_identity_check("quartic-det-factorization"));
  CHECK(polynomial_identity_check("quartic-hyperdet-zero"));
  for (int k = 1; k <= 5; ++k) CHECK(polynomial_identity_check("vandermonde-product(" + std::to_string(k) + ")"));
  CHECK_THROWS(polynomial_identity_check("unknown-identity"));
}

TEST_CASE("algebraic proof for the quartic graph") {
  QuarticProof p = quartic_tn_proof();
  CHECK(p.factorization);
  CHECK(p.first_factor_sos);
  CHECK(p.second_factor_sos);
  CHECK(p.hyperdet_zero);
  CHECK(p.holds());
}
