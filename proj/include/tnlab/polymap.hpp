// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/interval.hpp"
#include "tnlab/polynomial.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace tnlab {

enum class CoeffMode { rational, floating };
enum class DomainKind { box, circle };

/// Axis-aligned box; for circle domains a single angle interval.
struct Box {
  std::vector<Interval> sides;

  Box() = default;
  explicit Box(std::vector<Interval> s) : sides(std::move(s)) {}
  /// [lo,hi]^n
  static Box cube(std::size_t n, double lo, double hi);

  std::size_t dim() const { return sides.size(); }
  std::vector<double> center() const;
  std::vector<double> radius() const;
  double diameter() const;
  std::size_t widest() const;
  std::pair<Box, Box> bisect(std::size_t i) const;
  bool contains(std::span<const double> x, double slack = 0.0) const;
};

/// Polynomial map R^n -> R^q. Circle-domain maps are polynomials in (c, s)
/// standing for (cos t, sin t).
struct PolyMap {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<Polynomial> components;
  CoeffMode mode = CoeffMode::rational;
  DomainKind domain = DomainKind::box;

  PolyMap() = default;
  PolyMap(std::size_t n_, std::vector<Polynomial> comps, CoeffMode m = CoeffMode::rational,
          DomainKind d = DomainKind::box);

  int degree() const;
  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;
  /// Partial derivative of every component in variable i.
  PolyMap partial(std::size_t i) const;
  /// True when the first n components are exactly the coordinate functions.
  bool is_graph() const;
  /// The components after the first n (the function whose graph this is).
  PolyMap graph_tail() const;
};

/// Value, first and second derivative at a point.
struct Jet2 {
  std::vector<double> point;
  Eigen::VectorXd value;
  Eigen::MatrixXd d1;               // q x n
  std::vector<Eigen::MatrixXd> d2;  // q matrices n x n
};

std::vector<Rational> eval_exact(const PolyMap& f, std::span<const Rational> x);
/// Evaluated exactly from the (exact) double inputs and rounded to nearest.
std::vector<double> eval(const PolyMap& f, std::span<const double> x);
Jet2 jet2(const PolyMap& f, std::span<const double> x);

/// Upper bound on the supremum over the box of the Frobenius norm of the
/// order-th derivative tensor (order 0..3). For circle domains the derivative
/// is taken in the angle.
double derivative_bound(const PolyMap& f, const Box& box, int order);

/// x -> (x, Q(x))
PolyMap graph(const PolyMap& Q);

/// (x_1..x_k) -> f(x_1) + ... + f(x_k), a map R^{kn} -> R^q.
PolyMap sum_map(const PolyMap& f, std::size_t k);

/// Angle derivative operator -s d/dc + c d/ds applied `order` times.
PolyMap circle_derivative(const PolyMap& f, int order);

/// Coordinate variables for an n-variable ring.
std::vector<Polynomial> variables(std::size_t n);

}  // namespace tnlab
