// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/branch_bound.hpp"
#include "tnlab/certificate.hpp"
#include "tnlab/polymap.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tnlab {

/// Pair of boxes standing for the pair set Bx x By; `diagonal` marks Bx == By,
/// in which case only one of the two symmetric halves is represented.
struct PairRegion {
  Box bx, by;
  bool diagonal = false;
  /// Lower bound on |x - y| over the region.
  double separation() const;
  /// Upper bound on |x - y| over the region.
  double max_separation() const;
};

/// Near-diagonal argument. If df_x u = df_y v with |v| = 1 and h = y - x, a
/// Taylor expansion of df along the segment gives
///   df_x (u - v) = d^2 f_x(h, v) + R,   |R| <= C3 |h|^2 / 2,
/// and projecting off Image(df_x) yields c2 |h| <= C3 |h|^2 / 2. Hence no
/// parallel pair has 0 < |x - y| < rho = 2 c2 / C3 (rho = inf when C3 = 0),
/// provided df is injective on the box (c1 > 0).
struct DiagonalRadius {
  std::string status;  // "ok", "not-semifree", "non-immersion", "inconclusive"
  double rho = 0.0;    // +inf allowed
  double c1 = 0.0, c2 = 0.0, C3 = 0.0;
  std::optional<Witness> failure;
  SearchStats stats;
};

DiagonalRadius diagonal_exclusion_radius(const PolyMap& f, const Box& box, const Budget& budget = {});

struct TNOptions {
  double tol = 1e-10;     // double-parallel residual accepted as a refutation
  double rel_gap = 0.5;
  bool probes = true;     // try axis pairs through the center before searching
};

struct TNCertificate {
  Certificate cert;        // bound = offdiag_bound
  DiagonalRadius diagonal;
  double rho = 0.0;        // radius actually used (finite; the box diameter when the Taylor radius is infinite)
  double offdiag_bound = 0.0;
  std::optional<PairRegion> worst;
  double worst_lower = 0.0;
};

TNCertificate certify_tn(const PolyMap& f, const Box& box, const Budget& budget = {}, const TNOptions& opts = {});

struct KFoldReport {
  std::size_t samples = 0;
  double min_margin = 0.0;
  std::vector<std::vector<double>> worst_tuple;
  std::size_t below_tol = 0;
  std::vector<std::vector<double>> first_below;
};

/// Sampled (not certified) k-fold margins: the kn-th singular value of the
/// stacked differential over random pairwise-distinct k-tuples.
KFoldReport scan_kfold(const PolyMap& f, const Box& box, std::size_t k, std::size_t samples, std::uint64_t seed,
                       double tol = 1e-9);

}  // namespace tnlab
