// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/linalg.hpp"
#include "tnlab/polymap.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tnlab {

/// Precompiled derivatives of a PolyMap up to order 3 for fast floating
/// evaluation and interval enclosures over boxes.
class MapJets {
 public:
  MapJets() = default;
  explicit MapJets(const PolyMap& f);

  std::size_t n() const { return n_; }
  std::size_t q() const { return q_; }

  Eigen::VectorXd value(std::span<const double> x) const;
  Eigen::MatrixXd d1(std::span<const double> x) const;
  /// q matrices of size n x n.
  std::vector<Eigen::MatrixXd> d2(std::span<const double> x) const;
  /// Third derivatives, entry [k][(i*n + j)*n + l].
  std::vector<std::vector<double>> d3(std::span<const double> x) const;
  Jet2 jet(std::span<const double> x) const;

  /// Enclosure of df over the box: natural form intersected with the
  /// mean-value form about the box center.
  IntervalMatrix d1(const Box& box) const;
  /// Natural-form enclosures of the q Hessians over the box.
  std::vector<IntervalMatrix> d2(const Box& box) const;

  /// Sum_i a_i d^2 f(e_i, .) as a q x n interval matrix over x in `box`
  /// and a in `dir` (both boxes of dimension n).
  IntervalMatrix hessian_apply(const Box& box, std::span<const Interval> dir) const;

  /// Degree of every entry of d2 is at most zero, i.e. f is at most quadratic.
  bool constant_hessian() const { return degree_ <= 2; }

 private:
  std::size_t idx2(std::size_t i, std::size_t j) const { return i <= j ? i * n_ + j : j * n_ + i; }

  std::size_t n_ = 0, q_ = 0;
  int degree_ = -1;
  unsigned max_exp_ = 0;
  std::vector<CompiledPolynomial> f_;   // q
  std::vector<CompiledPolynomial> f1_;  // q*n
  std::vector<CompiledPolynomial> f2_;  // q*n*n (symmetric, i<=j filled)
  std::vector<CompiledPolynomial> f3_;  // q*n*n*n (i<=j<=l filled)
};

}  // namespace tnlab
