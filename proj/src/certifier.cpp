// SPDX-License-Identifier: Apache-2.0
#include "tnlab/certifier.hpp"

#include "tnlab/jet_engine.hpp"
#include "tnlab/linalg.hpp"
#include "tnlab/semifree.hpp"
#include "tnlab/symbil.hpp"
#include "tnlab/tangency.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tnlab {

double PairRegion::separation() const {
  double s = 0.0;
  for (std::size_t i = 0; i < bx.dim(); ++i) {
    double g = std::max({0.0, by.sides[i].lo - bx.sides[i].hi, bx.sides[i].lo - by.sides[i].hi});
    s += g * g;
  }
  return std::max(0.0, round_down(std::sqrt(s)));
}

double PairRegion::max_separation() const {
  double s = 0.0;
  for (std::size_t i = 0; i < bx.dim(); ++i) {
    double g = std::max(round_up(by.sides[i].hi - bx.sides[i].lo), round_up(bx.sides[i].hi - by.sides[i].lo));
    s = round_up(s + round_up(g * g));
  }
  return round_up(std::sqrt(s));
}

namespace {

class ImmersionSearch {
 public:
  explicit ImmersionSearch(const PolyMap& f) : jets_(f) {}

  RegionEval evaluate(const Box& b) const {
    RegionEval e;
    e.lower = sigma_min_lower(jets_.d1(b));
    e.estimate = sigma_min(jets_.d1(b.center()));
    return e;
  }
  std::vector<Box> split(const Box& b) const {
    auto [l, r] = b.bisect(b.widest());
    return {std::move(l), std::move(r)};
  }
  std::optional<Witness> refute(const Box& b, const RegionEval& e) {
    Eigen::MatrixXd d = jets_.d1(b.center());
    if (e.estimate > 1e-12 * std::max(1.0, d.norm())) return std::nullopt;
    Witness w;
    w.kind = "non-immersion";
    w.points = {b.center()};
    Eigen::VectorXd k = smallest_right_singular_vector(d);
    w.directions = {std::vector<double>(k.data(), k.data() + k.size())};
    w.residual = e.estimate;
    return w;
  }

 private:
  MapJets jets_;
};

}  // namespace

DiagonalRadius diagonal_exclusion_radius(const PolyMap& f, const Box& box, const Budget& budget) {
  if (box.dim() != f.n) throw std::invalid_argument("diagonal_exclusion_radius: box dimension differs from domain dimension");
  DiagonalRadius dr;
  dr.C3 = derivative_bound(f, box, 3);

  if (f.is_graph()) {
    dr.c1 = 1.0;  // sigma_min [I; Dg] >= 1
  } else {
    ImmersionSearch is(f);
    auto res = branch_and_bound<Box, Witness>(is, {box}, budget, 0.5);
    dr.stats = res.stats;
    if (res.refuted) {
      dr.status = "non-immersion";
      dr.failure = res.witnesses.front();
      return dr;
    }
    dr.c1 = std::max(0.0, res.bound);
    if (!(dr.c1 > 0.0)) {
      dr.status = "inconclusive";
      return dr;
    }
  }

  PolyMap tail = f.is_graph() ? f.graph_tail() : PolyMap();
  if (f.is_graph() && tail.degree() <= 2) {
    // constant Hessian: c2 >= min |d^2 g(a,b)| / sqrt(1 + |Dg|^2)
    SymBilinearMap h(f.n, tail.q);
    for (std::size_t k = 0; k < tail.q; ++k) {
      for (const auto& [m, c] : tail.components[k].terms()) {
        int deg = 0;
        for (unsigned e : m) deg += static_cast<int>(e);
        if (deg != 2) continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (unsigned e = 0; e < m[i]; ++e) idx.push_back(i);
        }
        h.set(k, idx[0], idx[1], idx[0] == idx[1] ? Rational(2 * c) : c);
      }
    }
    Certificate c = certify_nonsingular(h, budget);
    dr.stats.processed += c.stats.processed;
    if (c.verdict == Verdict::refuted) {
      dr.status = "not-semifree";
      Witness w;
      w.kind = "sff-kernel";
      w.points = {box.center()};
      w.directions = c.witness->points;
      w.residual = c.witness->residual;
      dr.failure = w;
      return dr;
    }
    if (c.verdict != Verdict::certified) {
      dr.status = "inconclusive";
      return dr;
    }
    double L = derivative_bound(tail, box, 1);
    dr.c2 = std::max(0.0, round_down(c.bound / round_up(std::sqrt(round_up(1.0 + round_up(L * L))))));
  } else {
    SemifreeCertificate sc = certify_semifree(f, box, budget);
    dr.stats.processed += sc.cert.stats.processed;
    if (sc.cert.verdict == Verdict::refuted) {
      dr.status = sc.cert.witness->kind == "non-immersion" ? "non-immersion" : "not-semifree";
      dr.failure = sc.cert.witness;
      return dr;
    }
    if (sc.cert.verdict != Verdict::certified) {
      dr.status = "inconclusive";
      return dr;
    }
    dr.c2 = sc.cert.bound;
  }
  dr.status = "ok";
  dr.rho = dr.C3 == 0.0 ? std::numeric_limits<double>::infinity() : std::max(0.0, round_down(round_down(2.0 * dr.c2) / dr.C3));
  return dr;
}

namespace {

class PairSearch {
 public:
  PairSearch(const PolyMap& f, double rho) : jets_(f), rho_(rho), degree_(f.degree()) {}

  RegionEval evaluate(const PairRegion& r) const {
    RegionEval e;
    if (r.max_separation() < rho_) {
      e.covered = true;
      e.lower = std::numeric_limits<double>::infinity();
      return e;
    }
    e.lower = r.diagonal ? 0.0 : sigma_min_lower(hcat(jets_.d1(r.bx), jets_.d1(r.by)));
    if (!r.diagonal) {
      std::vector<double> cx = r.bx.center(), cy = r.by.center();
      e.estimate = sigma_min(pair_matrix(jets_, cx, cy));
    }
    return e;
  }

  std::vector<PairRegion> split(const PairRegion& r) const {
    if (r.diagonal) {
      auto [b1, b2] = r.bx.bisect(r.bx.widest());
      return {PairRegion{b1, b1, true}, PairRegion{b1, b2, false}, PairRegion{b2, b2, true}};
    }
    bool left = r.bx.diameter() >= r.by.diameter();
    const Box& b = left ? r.bx : r.by;
    auto [b1, b2] = b.bisect(b.widest());
    if (left) return {PairRegion{b1, r.by, false}, PairRegion{b2, r.by, false}};
    return {PairRegion{r.bx, b1, false}, PairRegion{r.bx, b2, false}};
  }

  std::optional<Witness> refute(const PairRegion& r, const RegionEval&) {
    if (r.diagonal) return std::nullopt;
    return polish(r.bx.center(), r.by.center());
  }

  std::optional<Witness> polish(std::span<const double> x, std::span<const double> y) const {
    DoubleParallel dp = double_parallel_witness(jets_, x, y);
    return accept(dp);
  }

  std::optional<Witness> polish(std::span<const double> x, std::span<const double> y, std::span<const double> u,
                                std::span<const double> v) const {
    DoubleParallel dp = double_parallel_witness(jets_, x, y, u, v);
    return accept(dp);
  }

  void set_box(const Box& b) { box_ = b; }
  double tol = 1e-10;

 private:
  std::optional<Witness> accept(const DoubleParallel& dp) const {
    if (!dp.converged) return std::nullopt;
    double sep = 0.0;
    for (std::size_t i = 0; i < dp.x.size(); ++i) sep += (dp.x[i] - dp.y[i]) * (dp.x[i] - dp.y[i]);
    if (dp.residual >= scaled_parallel_tol(tol, std::sqrt(sep), degree_)) return std::nullopt;
    if (!box_.contains(dp.x, 1e-12) || !box_.contains(dp.y, 1e-12)) return std::nullopt;
    Witness w;
    w.kind = "double-parallel";
    w.points = {dp.x, dp.y};
    w.directions = {dp.u, dp.v};
    w.residual = dp.residual;
    return w;
  }

  MapJets jets_;
  double rho_;
  int degree_;
  Box box_;
};

}  // namespace

TNCertificate certify_tn(const PolyMap& f, const Box& box, const Budget& budget, const TNOptions& opts) {
  if (f.q < 2 * f.n) throw std::invalid_argument("certify_tn: target dimension below 2n");
  if (box.dim() != f.n) throw std::invalid_argument("certify_tn: box dimension differs from domain dimension");
  TNCertificate tc;
  Certificate& c = tc.cert;
  MapJets jets(f);

  auto refuted = [&](Witness w) {
    c.verdict = Verdict::refuted;
    c.bound = 0.0;
    c.witness = std::move(w);
    return tc;
  };

  PairSearch ps(f, 0.0);
  ps.set_box(box);
  ps.tol = opts.tol;

  if (opts.probes) {
    std::vector<double> ctr = box.center();
    for (std::size_t i = 0; i < f.n; ++i) {
      std::vector<double> y = ctr;
      y[i] = box.sides[i].hi;
      if (y[i] == ctr[i]) continue;
      if (pair_sigma_min(jets, ctr, y) > 1e-8 * std::max(1.0, jets.d1(ctr).norm())) continue;
      if (auto w = ps.polish(ctr, y)) return refuted(*w);
    }
  }

  tc.diagonal = diagonal_exclusion_radius(f, box, budget);
  const DiagonalRadius& dr = tc.diagonal;
  if (dr.status == "non-immersion" && dr.failure) {
    Witness w = *dr.failure;
    w.kind = "non-immersion";
    return refuted(w);
  }
  if (dr.status == "not-semifree" && dr.failure) {
    // a kernel pair (a, b) of the second fundamental form at x suggests double
    // parallels at x, x + t a or x -+ t a / 2 with direction b
    const auto& x = dr.failure->points[0];
    const auto& dirs = dr.failure->directions;
    for (int order = 0; order < 2; ++order) {
      const auto& a = dirs[static_cast<std::size_t>(order)];
      const auto& b = dirs[static_cast<std::size_t>(1 - order)];
      double tmax = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < f.n; ++i) {
        if (std::fabs(a[i]) < 1e-15) continue;
        double room = a[i] > 0 ? box.sides[i].hi - x[i] : x[i] - box.sides[i].lo;
        tmax = std::min(tmax, room / std::fabs(a[i]));
      }
      if (!std::isfinite(tmax) || tmax <= 0.0) continue;
      double t = std::min(1.0, tmax);
      for (int shrink = 0; shrink < 3; ++shrink, t *= 0.25) {
        std::vector<double> p1 = x, p2 = x, s1 = x, s2 = x;
        for (std::size_t i = 0; i < f.n; ++i) {
          p2[i] = x[i] + t * a[i];
          s1[i] = x[i] - 0.5 * t * a[i];
          s2[i] = x[i] + 0.5 * t * a[i];
        }
        if (auto w = ps.polish(p1, p2, b, b)) return refuted(*w);
        if (auto w = ps.polish(s1, s2, b, b)) return refuted(*w);
      }
    }
  }

  double rho = 0.0;
  if (dr.status == "ok") rho = std::min(dr.rho, box.diameter());
  tc.rho = rho;
  PairSearch search(f, rho);
  search.set_box(box);
  search.tol = opts.tol;
  auto res = branch_and_bound<PairRegion, Witness>(search, {PairRegion{box, box, true}}, budget, opts.rel_gap);
  c.stats = res.stats;
  c.stats.processed += dr.stats.processed;
  c.upper = res.upper;
  tc.offdiag_bound = std::max(0.0, res.bound);
  tc.worst = res.worst;
  tc.worst_lower = res.worst ? res.worst_lower : 0.0;
  if (res.refuted) return refuted(res.witnesses.front());
  c.bound = tc.offdiag_bound;
  if (rho > 0.0 && res.bound > 0.0) {
    c.verdict = Verdict::certified;
  } else {
    c.verdict = Verdict::inconclusive;
  }
  return tc;
}

KFoldReport scan_kfold(const PolyMap& f, const Box& box, std::size_t k, std::size_t samples, std::uint64_t seed,
                       double tol) {
  if (k < 1) throw std::invalid_argument("scan_kfold: k must be positive");
  if (f.q < k * f.n) throw std::invalid_argument("scan_kfold: target dimension below kn");
  if (box.dim() != f.n) throw std::invalid_argument("scan_kfold: box dimension differs from domain dimension");
  MapJets jets(f);
  std::mt19937_64 rng(splitmix64(seed));
  KFoldReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  auto kn = static_cast<Eigen::Index>(k * f.n);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<std::vector<double>> pts(k, std::vector<double>(f.n));
    for (auto& p : pts) {
      for (std::size_t i = 0; i < f.n; ++i) {
        std::uniform_real_distribution<double> u(box.sides[i].lo, box.sides[i].hi);
        p[i] = u(rng);
      }
    }
    bool distinct = true;
    for (std::size_t i = 0; i < k && distinct; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) distinct = distinct && pts[i] != pts[j];
    }
    if (!distinct) continue;
    ++rep.samples;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked_differential(jets, pts));
    double m = svd.singularValues()(kn - 1);
    if (m < rep.min_margin) {
      rep.min_margin = m;
      rep.worst_tuple = pts;
    }
    if (m < tol) {
      if (rep.below_tol == 0) rep.first_below = pts;
      ++rep.below_tol;
    }
  }
  return rep;
}

}  // namespace tnlab
