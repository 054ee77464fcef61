// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/branch_bound.hpp"
#include "tnlab/certificate.hpp"
#include "tnlab/linalg.hpp"
#include "tnlab/polymap.hpp"
#include "tnlab/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace tnlab {

/// Symmetric bilinear map B: R^n x R^n -> R^p with coefficients B[k][i][j].
struct SymBilinearMap {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<Rational> coeffs;  // k-major, then i, then j

  SymBilinearMap() = default;
  SymBilinearMap(std::size_t n_, std::size_t p_) : n(n_), p(p_), coeffs(n_ * n_ * p_) {}

  const Rational& at(std::size_t k, std::size_t i, std::size_t j) const { return coeffs[(k * n + i) * n + j]; }
  /// Sets both (i,j) and (j,i).
  void set(std::size_t k, std::size_t i, std::size_t j, const Rational& v);
  /// Throws std::invalid_argument when the coefficient tensor is not symmetric.
  void validate() const;

  /// p x n matrix v |-> B(x, v).
  Eigen::MatrixXd slice(std::span<const double> x) const;
};

std::vector<Rational> apply(const SymBilinearMap& b, std::span<const Rational> x, std::span<const Rational> y);
std::vector<double> apply(const SymBilinearMap& b, std::span<const double> x, std::span<const double> y);

/// Polarization of a homogeneous quadratic map.
SymBilinearMap from_quadratic(const PolyMap& q);
/// x |-> B(x, x)
PolyMap to_quadratic(const SymBilinearMap& b);

/// Multiplication of two polynomials of degree n-1, R^n x R^n -> R^{2n-1}.
SymBilinearMap poly_mult(std::size_t n);
/// Multiplication of complex polynomials of degree n/2-1, R^n x R^n -> R^{2n-2}.
SymBilinearMap complex_mult(std::size_t n);

struct NonsingularOptions {
  double tol = 1e-9;      // refutation tolerance on |B(x,y)| for unit x, y
  double rel_gap = 0.5;   // regions with lower >= (1-gap)*best are discharged
};

/// Certifies min over unit x, y of |B(x,y)| > 0, or finds unit x, y with
/// |B(x,y)| < tol.
Certificate certify_nonsingular(const SymBilinearMap& b, const Budget& budget = {}, const NonsingularOptions& opts = {});

/// Exact check of a singularity witness: |B(x,y)| < tol |x| |y| in rationals.
bool verify_singular_witness(const SymBilinearMap& b, std::span<const double> x, std::span<const double> y, double tol);

/// Cayley hyperdeterminant of the Hessian pair of x |-> B(x,x) (n = p = 2).
Rational hyperdet(const SymBilinearMap& b);

int codim_sigma(int n, int p);
int corank_codim(int n, int q, int r);

struct StrataSample {
  std::size_t trials = 0;
  std::size_t refuted = 0, certified = 0, inconclusive = 0;
  std::size_t witnesses_verified = 0;
  std::vector<Certificate> certificates;

  double fraction_refuted() const { return trials ? double(refuted) / double(trials) : 0.0; }
  double fraction_certified() const { return trials ? double(certified) / double(trials) : 0.0; }
  double fraction_inconclusive() const { return trials ? double(inconclusive) / double(trials) : 0.0; }
};

/// Gaussian symmetric tensor: diagonal N(0,1), off-diagonal N(0,1/2), the
/// distribution invariant under x -> Ox.
SymBilinearMap random_gaussian(std::size_t n, std::size_t p, std::uint64_t seed);

StrataSample sample_strata(std::size_t n, std::size_t p, std::size_t trials, std::uint64_t seed,
                           const Budget& budget = {20000, 40, 60.0, 0}, const NonsingularOptions& opts = {});

/// Coordinates of x o y in the order (i,j), i <= j: 2 x_i y_i on the diagonal,
/// x_i y_j + x_j y_i off it.
std::vector<Rational> symmetric_segre(std::span<const Rational> x, std::span<const Rational> y);
std::vector<double> symmetric_segre(std::span<const double> x, std::span<const double> y);
/// p x n(n+1)/2 matrix L with B(x,y) = L s(x,y).
std::vector<std::vector<Rational>> segre_form(const SymBilinearMap& b);

/// Deterministic 64-bit mixer for deriving per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace tnlab
