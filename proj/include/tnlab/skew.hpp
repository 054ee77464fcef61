// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/branch_bound.hpp"
#include "tnlab/certificate.hpp"
#include "tnlab/polymap.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace tnlab {

/// Trigonometric loop t -> sum_{k=1..d} A_k cos kt + B_k sin kt in R^3.
/// Column 2(k-1) of `coeffs` is A_k, column 2(k-1)+1 is B_k.
struct TrigLoop {
  int degree = 0;
  Eigen::MatrixXd coeffs;  // 3 x 2d

  static TrigLoop circle(int degree);
  Eigen::Vector3d velocity(double t) const;
  Eigen::Vector3d acceleration(double t) const;
  PolyMap to_polymap() const;
};

/// Sampled skew margin on an N-point grid: the minimum of the sine of the
/// angle between velocities at grid pairs with circular distance at least
/// delta, and of the sine of the velocity-acceleration angle at every sample.
double skew_margin(const TrigLoop& loop, int samples = 128, double delta = 0.3926990816987241);

/// Minimum normalized cross product over a full samples x samples grid of
/// distinct angle pairs (no diagonal exclusion).
double sampled_pair_margin(const TrigLoop& loop, int samples);

struct SkewCertificate {
  Certificate cert;
  double kappa_lower = 0.0;  // certified lower bound of |T x T'| on the loop
  double delta = 0.0;        // pairs closer than this are excluded by curvature
};

/// Rigorous: near-diagonal pairs by a Taylor bound, the rest by branch and bound.
SkewCertificate certify_skew(const TrigLoop& loop, const Budget& budget = {});

struct SkewSearch {
  TrigLoop initial;
  TrigLoop best;
  double initial_margin = 0.0;
  double margin = 0.0;
  std::vector<double> history;  // best-so-far after each iteration
  SkewCertificate certification;
};

SkewSearch search_skew(int degree, int iters, std::uint64_t seed, const Budget& certify_budget = {});

}  // namespace tnlab
