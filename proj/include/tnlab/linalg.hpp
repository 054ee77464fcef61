// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/interval.hpp"

#include <Eigen/Dense>

#include <vector>

namespace tnlab {

/// Dense matrix of intervals, row-major.
struct IntervalMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Interval> data;

  IntervalMatrix() = default;
  IntervalMatrix(Eigen::Index r, Eigen::Index c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c)) {}
  static IntervalMatrix point(const Eigen::MatrixXd& m);

  Interval& operator()(Eigen::Index i, Eigen::Index j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  const Interval& operator()(Eigen::Index i, Eigen::Index j) const {
    return data[static_cast<std::size_t>(i * cols + j)];
  }

  Eigen::MatrixXd mid() const;
  /// Entrywise radius about mid(), rounded up so that mid +- rad covers each entry.
  Eigen::MatrixXd rad() const;
};

IntervalMatrix hcat(const IntervalMatrix& a, const IntervalMatrix& b);
/// Entrywise intersection of two enclosures of the same matrix.
IntervalMatrix intersect(const IntervalMatrix& a, const IntervalMatrix& b);

/// Smallest singular value of A viewed as a map R^cols -> R^rows; zero when
/// rows < cols (the map cannot be injective).
double sigma_min(const Eigen::MatrixXd& a);

/// Number of singular values >= eps * sigma_max.
int numerical_rank(const Eigen::MatrixXd& a, double eps = 1e-9);

/// Rigorous upper bound on the spectral norm of a nonnegative matrix.
double spectral_norm_upper(const Eigen::MatrixXd& r);

/// Rigorous lower bound on min sigma_min(A) over all A in the interval matrix:
/// sigma_min(mid) - |rad|_2 - guard, clamped at zero.
double sigma_min_lower(const IntervalMatrix& m);

/// Orthonormal basis of the numerical null space (columns).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double eps = 1e-9);

/// Right singular vector belonging to the smallest singular value (as a map
/// R^cols -> R^rows; for rows < cols a null vector).
Eigen::VectorXd smallest_right_singular_vector(const Eigen::MatrixXd& a);

}  // namespace tnlab
