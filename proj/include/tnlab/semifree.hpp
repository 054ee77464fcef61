// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/branch_bound.hpp"
#include "tnlab/certificate.hpp"
#include "tnlab/jet_engine.hpp"
#include "tnlab/polymap.hpp"
#include "tnlab/symbil.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tnlab {

struct SFFData {
  std::vector<double> point;
  Eigen::MatrixXd frame;       // df_x, q x n
  Eigen::MatrixXd projector;   // P_N, q x q
  Eigen::MatrixXd normal;      // orthonormal basis of the normal space, q x (q-n)
  std::vector<Eigen::MatrixXd> projected;  // P_N d^2 f_x, q matrices n x n
  SymBilinearMap form;         // normal-frame coordinates of the projected Hessian
};

/// Throws std::domain_error when df_x is rank deficient.
SFFData second_fundamental_form(const PolyMap& f, std::span<const double> x);
SFFData second_fundamental_form(const MapJets& jets, std::span<const double> x);

struct SemifreeOptions {
  double tol = 1e-9;               // refutation tolerance on |SFF_x(a,b)|
  double rel_gap = 0.5;
  bool collect_all = false;        // keep searching after a failure, excluding a ball around it
  double exclusion_radius = 0.1;
};

/// Auxiliary comparison of the two semifree formulations: smallest principal
/// angle between Image(df_x) and the span of all second partials.
struct ImageCheck {
  std::size_t samples = 0;
  double min_sine = 1.0;        // sine of the smallest principal angle seen
  bool forced_by_dimension = false;  // n + dim span(d^2 f) > q, so the images must meet
  bool discrepancy = false;     // SFF certified yet the images meet
};

struct SemifreeCertificate {
  Certificate cert;             // bound: lower bound on |P_N d^2 f_x(a,b)| for unit a, b
  std::vector<Witness> failures;
  bool complete = false;        // every region outside the exclusion balls was certified
  std::optional<Box> worst;     // x-box of the weakest open region
  double worst_lower = 0.0;
  ImageCheck image_check;
};

SemifreeCertificate certify_semifree(const PolyMap& f, const Box& box, const Budget& budget = {},
                                     const SemifreeOptions& opts = {});

ImageCheck image_intersection_check(const MapJets& jets, const Box& box, bool sff_certified);

struct CubicReport {
  std::vector<double> point;
  std::vector<double> u, v;
  bool isolated = false;
  double isolation_margin = 0.0;
  bool mixed = false;
  bool restored_semifree = false;
  bool independent = false;
  double independence_margin_1 = 0.0;
  double independence_margin_2 = 0.0;
  std::string verdict;  // "cubic", "non-cubic", "no-verdict"
  std::string reason;
};

struct CubicOptions {
  double tol = 1e-6;
  double isolation_gap = 1e-6;
};

CubicReport cubic_singularity_check(const PolyMap& f, std::span<const double> x0, const CubicOptions& opts = {});

struct TraceNode {
  std::vector<double> x, y, u, v;
  double residual = 0.0;     // |df_x u - df_y v|
  double sigma = 0.0;        // pair_sigma_min(x, y)
};

struct TraceOptions {
  double min_separation = 1e-2;  // stop when |x - y| falls below this
  double max_norm = 10.0;        // stop when a point leaves this ball
  std::optional<Box> box;        // stop when a point leaves the box
  double corrector_tol = 1e-15;
  double min_step = 1e-6;
};

struct TraceResult {
  std::string status;              // "ok", "empty", "corrector-divergence", "locus-dimension"
  int locus_dimension = 0;          // observed dimension of the locus at the seed
  int null_dimension = 0;           // dimension of the linearized solution space at the seed
  std::vector<TraceNode> nodes;    // ordered along the curve
  std::vector<std::vector<double>> projection;  // first-factor projection of each node
};

TraceResult trace_sigma(const PolyMap& f, std::span<const double> x0, std::span<const double> y0, int steps, double h,
                        const TraceOptions& opts = {});

/// Projected curve (first two coordinates) with section arrows, as SVG text.
std::string trace_svg(const std::vector<TraceResult>& curves, int width = 480, int height = 480);

}  // namespace tnlab
