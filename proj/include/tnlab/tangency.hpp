// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/jet_engine.hpp"
#include "tnlab/polymap.hpp"
#include "tnlab/rational.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace tnlab {

/// [df_x | df_y], q x 2n.
Eigen::MatrixXd pair_matrix(const MapJets& jets, std::span<const double> x, std::span<const double> y);

/// Smallest singular value of [df_x | df_y]. Throws for x == y or q < 2n.
double pair_sigma_min(const PolyMap& f, std::span<const double> x, std::span<const double> y);
double pair_sigma_min(const MapJets& jets, std::span<const double> x, std::span<const double> y);

/// Numerical rank of the q x kn stacked differential at pairwise distinct points.
int kfold_rank(const PolyMap& f, const std::vector<std::vector<double>>& points, double eps = 1e-9);
Eigen::MatrixXd stacked_differential(const MapJets& jets, const std::vector<std::vector<double>>& points);

/// prod_{i<j} (x_j - x_i), exactly.
Rational vandermonde_oracle(std::span<const Rational> xs);

/// |T(s) x T(t)| for a circle-domain loop into R^3, T the angle velocity.
double skew_residual(const PolyMap& loop, double s, double t);

struct DoubleParallelOptions {
  double tol = 1e-10;          // residual required for convergence
  double min_separation = 1e-6;  // |x - y| below this counts as collapse onto the diagonal
  int max_iter = 400;
};

/// Polished solution of df_x u = df_y v with |u|^2 + |v|^2 = 2.
struct DoubleParallel {
  bool converged = false;
  std::string report;
  std::vector<double> x, y, u, v;
  double residual = 0.0;
  int iterations = 0;
};

DoubleParallel double_parallel_witness(const PolyMap& f, std::span<const double> x0, std::span<const double> y0,
                                       const DoubleParallelOptions& opts = {});
DoubleParallel double_parallel_witness(const MapJets& jets, std::span<const double> x0, std::span<const double> y0,
                                       const DoubleParallelOptions& opts = {});
/// Same, starting from given directions instead of the pair-matrix null vector.
DoubleParallel double_parallel_witness(const MapJets& jets, std::span<const double> x0, std::span<const double> y0,
                                       std::span<const double> u0, std::span<const double> v0,
                                       const DoubleParallelOptions& opts = {});

/// |df_x u - df_y v| and the residual system used by the polisher (exposed for
/// continuation). z = (x, y, u, v).
/// Acceptance threshold for a double-parallel residual at separation `sep`:
/// tol * min(1, sep)^(degree - 1). Near a flat point of a degree-d map the
/// residual of nearby pairs already decays like sep^(d-1) without any parallel.
double scaled_parallel_tol(double tol, double sep, int degree);

void double_parallel_system(const MapJets& jets, const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J);

}  // namespace tnlab
