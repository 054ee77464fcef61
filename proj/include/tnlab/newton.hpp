// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <functional>

namespace tnlab {

/// Fills F(z) and its Jacobian.
using ResidualFn = std::function<void(const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J)>;

struct NewtonOptions {
  double tol = 1e-13;       // residual norm regarded as converged
  int max_iter = 400;
  double rank_eps = 1e-10;  // relative pseudo-inverse cutoff
  double max_step = 1.0;    // trust radius for a single step
};

struct NewtonResult {
  Eigen::VectorXd z;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Underdetermined (or square) Newton that converges to the point of
/// {F = 0} closest to the seed: min-norm Gauss-Newton steps combined with a
/// tangential pull back toward the seed.
NewtonResult closest_point(const ResidualFn& fn, const Eigen::VectorXd& seed, const NewtonOptions& opts = {});

/// Residual of fn at z.
double residual_norm(const ResidualFn& fn, const Eigen::VectorXd& z);

}  // namespace tnlab
