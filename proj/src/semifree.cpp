// SPDX-License-Identifier: Apache-2.0
#include "tnlab/semifree.hpp"

#include "tnlab/linalg.hpp"
#include "tnlab/newton.hpp"
#include "tnlab/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tnlab {

SFFData second_fundamental_form(const MapJets& jets, std::span<const double> x) {
  if (x.size() != jets.n()) throw std::invalid_argument("second_fundamental_form: dimension mismatch");
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  SFFData s;
  s.point.assign(x.begin(), x.end());
  s.frame = jets.d1(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.frame, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (q < n || sv(n - 1) <= 1e-12 * std::max(1.0, sv(0))) throw std::domain_error("second_fundamental_form: df_x is rank deficient");
  s.normal = svd.matrixU().rightCols(q - n);
  s.projector = s.normal * s.normal.transpose();
  auto h = jets.d2(x);
  s.projected.assign(static_cast<std::size_t>(q), Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index k = 0; k < q; ++k) {
    for (Eigen::Index m = 0; m < q; ++m) s.projected[static_cast<std::size_t>(k)] += s.projector(k, m) * h[static_cast<std::size_t>(m)];
  }
  s.form = SymBilinearMap(jets.n(), static_cast<std::size_t>(q - n));
  for (Eigen::Index k = 0; k < q - n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        double v = 0.0;
        for (Eigen::Index m = 0; m < q; ++m) v += s.normal(m, k) * h[static_cast<std::size_t>(m)](i, j);
        s.form.set(static_cast<std::size_t>(k), static_cast<std::size_t>(i), static_cast<std::size_t>(j), from_double(v));
      }
    }
  }
  return s;
}

SFFData second_fundamental_form(const PolyMap& f, std::span<const double> x) { return second_fundamental_form(MapJets(f), x); }

namespace {

// |P_N d^2 f_x(a, b)|
double sff_value(const MapJets& jets, std::span<const double> x, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  auto q = static_cast<Eigen::Index>(jets.q());
  Eigen::MatrixXd d = jets.d1(x);
  auto h = jets.d2(x);
  Eigen::VectorXd s(q);
  for (Eigen::Index k = 0; k < q; ++k) s(k) = a.dot(h[static_cast<std::size_t>(k)] * b);
  // least-squares residual of s against the tangent space
  Eigen::VectorXd w = d.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(s);
  return (s - d * w).norm();
}

struct SFRegion {
  Box x;
  std::size_t face = 0;
  Box a;
};

class SemifreeSearch {
 public:
  SemifreeSearch(const PolyMap& f, const Box& box, const SemifreeOptions& o)
      : jets_(f), box_(box), opts_(o), degree_(f.degree()) {
    if (f.is_graph()) tail_.emplace(f.graph_tail());
  }

  RegionEval evaluate(const SFRegion& r) const {
    RegionEval e;
    if (opts_.collect_all && inside_exclusion(r.x)) {
      e.covered = true;
      e.lower = std::numeric_limits<double>::infinity();
      return e;
    }
    if (tail_) return evaluate_graph(r);
    IntervalMatrix k = hcat(jets_.hessian_apply(r.x, r.a.sides), jets_.d1(r.x));
    double sl = sigma_min_lower(k);
    e.lower = sl > 0.0 ? std::max(0.0, round_down(sl / norm_upper(r.a.sides))) : 0.0;
    std::vector<double> xc = r.x.center(), ac = r.a.center();
    Eigen::Map<Eigen::VectorXd> av(ac.data(), static_cast<Eigen::Index>(ac.size()));
    e.estimate = sigma_min(kmatrix(xc, av)) / av.norm();
    return e;
  }

  std::vector<SFRegion> split(const SFRegion& r) const {
    // candidates: x coordinates (when df or d^2 f vary) and free a coordinates
    std::size_t n = jets_.n();
    double best = -1.0;
    bool in_x = false;
    std::size_t idx = 0;
    if (degree_ >= 2) {
      for (std::size_t i = 0; i < n; ++i) {
        double w = r.x.sides[i].width() / std::max(1e-300, box_.sides[i].width()) * 2.0;
        if (w > best) {
          best = w;
          in_x = true;
          idx = i;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r.face) continue;
      double w = r.a.sides[i].width();
      if (w > best) {
        best = w;
        in_x = false;
        idx = i;
      }
    }
    if (best <= 0.0) return {r};
    if (in_x) {
      auto [b1, b2] = r.x.bisect(idx);
      return {SFRegion{std::move(b1), r.face, r.a}, SFRegion{std::move(b2), r.face, r.a}};
    }
    auto [a1, a2] = r.a.bisect(idx);
    return {SFRegion{r.x, r.face, std::move(a1)}, SFRegion{r.x, r.face, std::move(a2)}};
  }

  std::optional<Witness> refute(const SFRegion& r, const RegionEval&) {
    auto n = static_cast<Eigen::Index>(jets_.n());
    std::vector<double> xc = r.x.center(), ac = r.a.center();
    Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(ac.data(), n);
    a.normalize();
    Eigen::MatrixXd d = jets_.d1(xc);
    if (sigma_min(d) <= 1e-12 * std::max(1.0, d.norm())) {
      Witness w;
      w.kind = "non-immersion";
      w.points = {xc};
      w.directions = {std::vector<double>(smallest_right_singular_vector(d).data(), smallest_right_singular_vector(d).data() + n)};
      w.residual = sigma_min(d);
      return accept(w);
    }
    Eigen::VectorXd bw = smallest_right_singular_vector(kmatrix(xc, a));
    Eigen::VectorXd b = bw.head(n), wv = bw.tail(n);
    if (b.norm() < 1e-12) return std::nullopt;
    wv /= b.norm();
    b.normalize();
    Eigen::VectorXd z(4 * n);
    z << Eigen::Map<Eigen::VectorXd>(xc.data(), n), a, b, wv;
    ResidualFn fn = [&](const Eigen::VectorXd& v, Eigen::VectorXd& F, Eigen::MatrixXd& J) { system(v, F, J); };
    NewtonOptions no;
    no.tol = 1e-14;
    NewtonResult nr = closest_point(fn, z, no);
    if (!std::isfinite(nr.z.norm())) return std::nullopt;
    std::vector<double> xs(nr.z.data(), nr.z.data() + n);
    if (!box_.contains(xs, 1e-9)) return std::nullopt;
    Eigen::VectorXd as = nr.z.segment(n, n).normalized(), bs = nr.z.segment(2 * n, n).normalized();
    double val = sff_value(jets_, xs, as, bs);
    if (!(val < opts_.tol)) return std::nullopt;
    Witness w;
    w.kind = "sff-kernel";
    w.points = {xs};
    w.directions = {std::vector<double>(as.data(), as.data() + n), std::vector<double>(bs.data(), bs.data() + n)};
    w.residual = val;
    return accept(w);
  }

  const std::vector<Witness>& failures() const { return failures_; }

 private:
  // For f = (x, g(x)) the normal part of (0, h) has length at least
  // |h| / sqrt(1 + |Dg|^2), and P_N d^2 f(a, b) = 0 iff d^2 g(a, b) = 0.
  RegionEval evaluate_graph(const SFRegion& r) const {
    RegionEval e;
    IntervalMatrix m = tail_->hessian_apply(r.x, r.a.sides);
    IntervalMatrix d = tail_->d1(r.x);
    double dg = 0.0;
    for (Eigen::Index i = 0; i < d.rows; ++i) {
      for (Eigen::Index j = 0; j < d.cols; ++j) dg = round_up(dg + round_up(d(i, j).mag() * d(i, j).mag()));
    }
    double scale = round_up(std::sqrt(round_up(1.0 + dg)));
    double sl = sigma_min_lower(m);
    e.lower = sl > 0.0 ? std::max(0.0, round_down(round_down(sl / norm_upper(r.a.sides)) / scale)) : 0.0;
    std::vector<double> xc = r.x.center(), ac = r.a.center();
    Eigen::Map<Eigen::VectorXd> av(ac.data(), static_cast<Eigen::Index>(ac.size()));
    auto h = tail_->d2(xc);
    Eigen::MatrixXd mp(static_cast<Eigen::Index>(h.size()), av.size());
    for (std::size_t k = 0; k < h.size(); ++k) mp.row(static_cast<Eigen::Index>(k)) = (h[k] * av).transpose();
    double dn = tail_->d1(xc).norm();
    e.estimate = sigma_min(mp) / av.norm() / std::sqrt(1.0 + dn * dn);
    return e;
  }

  std::optional<Witness> accept(const Witness& w) {
    if (opts_.collect_all) {
      for (const auto& f : failures_) {
        double d = 0.0;
        for (std::size_t i = 0; i < f.points[0].size(); ++i) d += std::pow(f.points[0][i] - w.points[0][i], 2);
        if (std::sqrt(d) < opts_.exclusion_radius) return std::nullopt;
      }
    }
    failures_.push_back(w);
    return w;
  }

  bool inside_exclusion(const Box& b) const {
    for (const auto& f : failures_) {
      double s = 0.0;
      for (std::size_t i = 0; i < b.dim(); ++i) {
        double d = std::max(std::fabs(b.sides[i].lo - f.points[0][i]), std::fabs(b.sides[i].hi - f.points[0][i]));
        s += d * d;
      }
      if (std::sqrt(s) < opts_.exclusion_radius) return true;
    }
    return false;
  }

  Eigen::MatrixXd kmatrix(std::span<const double> x, const Eigen::VectorXd& a) const {
    auto n = static_cast<Eigen::Index>(jets_.n()), q = static_cast<Eigen::Index>(jets_.q());
    auto h = jets_.d2(x);
    Eigen::MatrixXd k(q, 2 * n);
    for (Eigen::Index r = 0; r < q; ++r) k.block(r, 0, 1, n) = (h[static_cast<std::size_t>(r)] * a).transpose();
    k.rightCols(n) = jets_.d1(x);
    return k;
  }

  // z = (x, a, b, w): d^2 f_x(a, b) + df_x w = 0, |a| = |b| = 1
  void system(const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J) const {
    auto n = static_cast<Eigen::Index>(jets_.n()), q = static_cast<Eigen::Index>(jets_.q());
    std::span<const double> x(z.data(), static_cast<std::size_t>(n));
    Eigen::VectorXd a = z.segment(n, n), b = z.segment(2 * n, n), w = z.segment(3 * n, n);
    Eigen::MatrixXd d = jets_.d1(x);
    auto h = jets_.d2(x);
    auto t = jets_.d3(x);
    F.resize(q + 2);
    J = Eigen::MatrixXd::Zero(q + 2, 4 * n);
    for (Eigen::Index k = 0; k < q; ++k) {
      const auto& hk = h[static_cast<std::size_t>(k)];
      const auto& tk = t[static_cast<std::size_t>(k)];
      F(k) = a.dot(hk * b) + d.row(k).dot(w);
      for (Eigen::Index l = 0; l < n; ++l) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = 0; j < n; ++j) s += tk[static_cast<std::size_t>((i * n + j) * n + l)] * a(i) * b(j);
          s += hk(i, l) * w(i);
        }
        J(k, l) = s;
      }
      J.block(k, n, 1, n) = (hk * b).transpose();
      J.block(k, 2 * n, 1, n) = (hk * a).transpose();
      J.block(k, 3 * n, 1, n) = d.row(k);
    }
    F(q) = 0.5 * (a.squaredNorm() - 1.0);
    F(q + 1) = 0.5 * (b.squaredNorm() - 1.0);
    J.block(q, n, 1, n) = a.transpose();
    J.block(q + 1, 2 * n, 1, n) = b.transpose();
  }

  MapJets jets_;
  std::optional<MapJets> tail_;
  Box box_;
  SemifreeOptions opts_;
  int degree_;
  std::vector<Witness> failures_;
};

}  // namespace

ImageCheck image_intersection_check(const MapJets& jets, const Box& box, bool sff_certified) {
  ImageCheck ic;
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  // sample: center and the 3^n grid for small n, else center and corners
  std::vector<std::vector<double>> pts;
  std::size_t dim = box.dim();
  std::size_t per = dim <= 3 ? 3 : 2;
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= per;
  pts.push_back(box.center());
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<double> p(dim);
    std::size_t r = c;
    for (std::size_t i = 0; i < dim; ++i) {
      std::size_t d = r % per;
      r /= per;
      const Interval& s = box.sides[i];
      p[i] = per == 3 ? (d == 0 ? s.lo : d == 1 ? s.mid() : s.hi) : (d == 0 ? s.lo : s.hi);
    }
    pts.push_back(std::move(p));
  }
  for (const auto& p : pts) {
    Eigen::MatrixXd d = jets.d1(p);
    auto h = jets.d2(p);
    Eigen::MatrixXd s(q, n * (n + 1) / 2);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j, ++c) {
        for (Eigen::Index k = 0; k < q; ++k) s(k, c) = h[static_cast<std::size_t>(k)](i, j);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> sd(d, Eigen::ComputeThinU), ss(s, Eigen::ComputeThinU);
    int rd = numerical_rank(d), rs = s.norm() == 0.0 ? 0 : numerical_rank(s);
    ++ic.samples;
    if (rd + rs > q) ic.forced_by_dimension = true;
    if (rd == 0 || rs == 0) continue;
    Eigen::MatrixXd qd = sd.matrixU().leftCols(rd), qs = ss.matrixU().leftCols(rs);
    Eigen::JacobiSVD<Eigen::MatrixXd> cs(qd.transpose() * qs);
    double cmax = std::min(1.0, cs.singularValues()(0));
    ic.min_sine = std::min(ic.min_sine, std::sqrt(std::max(0.0, 1.0 - cmax * cmax)));
  }
  ic.discrepancy = sff_certified && (ic.forced_by_dimension || ic.min_sine < 1e-9);
  return ic;
}

SemifreeCertificate certify_semifree(const PolyMap& f, const Box& box, const Budget& budget, const SemifreeOptions& opts) {
  if (box.dim() != f.n) throw std::invalid_argument("certify_semifree: box dimension differs from domain dimension");
  SemifreeCertificate out;
  SemifreeSearch search(f, box, opts);
  std::vector<SFRegion> roots;
  for (std::size_t face = 0; face < f.n; ++face) {
    Box a = Box::cube(f.n, -1.0, 1.0);
    a.sides[face] = Interval(1.0);
    roots.push_back(SFRegion{box, face, std::move(a)});
  }
  auto res = branch_and_bound<SFRegion, Witness>(search, std::move(roots), budget, opts.rel_gap, opts.collect_all);
  Certificate& c = out.cert;
  c.stats = res.stats;
  c.upper = res.upper;
  out.failures = search.failures();
  if (res.worst) {
    out.worst = res.worst->x;
    out.worst_lower = res.worst_lower;
  }
  if (!res.witnesses.empty()) {
    c.verdict = Verdict::refuted;
    c.witness = res.witnesses.front();
    c.extra_witnesses.assign(res.witnesses.begin() + 1, res.witnesses.end());
    c.bound = 0.0;
    out.complete = res.complete;
  } else if (res.bound > 0.0) {
    c.verdict = Verdict::certified;
    c.bound = res.bound;
    out.complete = true;
  } else {
    c.verdict = Verdict::inconclusive;
    c.bound = std::max(0.0, res.bound);
  }
  out.image_check = image_intersection_check(MapJets(f), box, c.verdict == Verdict::certified);
  return out;
}

CubicReport cubic_singularity_check(const PolyMap& f, std::span<const double> x0, const CubicOptions& opts) {
  CubicReport rep;
  rep.point.assign(x0.begin(), x0.end());
  MapJets jets(f);
  auto n = static_cast<Eigen::Index>(f.n), q = static_cast<Eigen::Index>(f.q);
  SFFData sff;
  try {
    sff = second_fundamental_form(jets, x0);
  } catch (const std::domain_error&) {
    rep.verdict = "no-verdict";
    rep.reason = "not an immersion at the point";
    return rep;
  }
  Certificate c = certify_nonsingular(sff.form, Budget{50000, 60, 60.0, 1});
  if (c.verdict == Verdict::certified) {
    rep.verdict = "non-cubic";
    rep.reason = "semifree at the point";
    return rep;
  }
  if (c.verdict != Verdict::refuted) {
    rep.verdict = "no-verdict";
    rep.reason = "kernel pair not found within budget";
    return rep;
  }
  rep.u = c.witness->points[0];
  rep.v = c.witness->points[1];
  Eigen::Map<const Eigen::VectorXd> u(rep.u.data(), n), v(rep.v.data(), n);

  rep.mixed = std::fabs(u.dot(v)) < 1.0 - 1e-6;
  if (!rep.mixed) {
    rep.verdict = "non-cubic";
    rep.reason = "pure direction: kernel pair is parallel";
    return rep;
  }

  // isolation: either the kernel pair is a regular solution of SFF(u,v) = 0,
  // |u| = |v| = 1, or no kernel pair lies on a small sphere around it in the
  // first-order null directions (the SFF then grows at least like r^2)
  {
    Eigen::MatrixXd su = sff.form.slice(rep.u), sv = sff.form.slice(rep.v);
    auto p = su.rows();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p + 2, 2 * n);
    g.block(0, 0, p, n) = sv;
    g.block(0, n, p, n) = su;
    g.block(p, 0, 1, n) = u.transpose();
    g.block(p + 1, n, 1, n) = v.transpose();
    rep.isolation_margin = sigma_min(g);
    if (rep.isolation_margin <= opts.isolation_gap) {
      const double r = 1e-2;
      Eigen::MatrixXd nul = null_space(g, 1e-8);
      ResidualFn fn = [&](const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J) {
        Eigen::VectorXd a = z.head(n), b = z.tail(n);
        Eigen::VectorXd up = u + r * a, vp = v + r * b;
        Eigen::MatrixXd s_u = sff.form.slice(std::vector<double>(up.data(), up.data() + n));
        Eigen::MatrixXd s_v = sff.form.slice(std::vector<double>(vp.data(), vp.data() + n));
        F.resize(p + 3);
        F.head(p) = s_v * up;
        F(p) = a.dot(u);
        F(p + 1) = b.dot(v);
        F(p + 2) = 0.5 * (a.squaredNorm() + b.squaredNorm() - 1.0);
        J = Eigen::MatrixXd::Zero(p + 3, 2 * n);
        J.block(0, 0, p, n) = r * s_v;
        J.block(0, n, p, n) = r * s_u;
        J.block(p, 0, 1, n) = u.transpose();
        J.block(p + 1, n, 1, n) = v.transpose();
        J.block(p + 2, 0, 1, n) = a.transpose();
        J.block(p + 2, n, 1, n) = b.transpose();
      };
      double best = std::numeric_limits<double>::infinity();
      std::vector<Eigen::VectorXd> seeds;
      for (Eigen::Index c5 = 0; c5 < nul.cols(); ++c5) {
        seeds.push_back(nul.col(c5).normalized());
        seeds.push_back(-nul.col(c5).normalized());
      }
      std::mt19937_64 rng(0x15017a7eULL);
      std::normal_distribution<double> gauss;
      for (int s = 0; s < 32 && nul.cols() > 1; ++s) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(nul.rows());
        for (Eigen::Index c5 = 0; c5 < nul.cols(); ++c5) w += gauss(rng) * nul.col(c5);
        seeds.push_back(w.normalized());
      }
      NewtonOptions no;
      no.max_iter = 100;
      for (const auto& w : seeds) {
        NewtonResult nr = closest_point(fn, w, no);
        Eigen::VectorXd F;
        Eigen::MatrixXd J;
        fn(nr.z, F, J);
        if (!std::isfinite(F.norm()) || F.tail(3).norm() > 1e-8) continue;
        best = std::min(best, F.head(p).norm() / (r * r));
      }
      rep.isolation_margin = std::isfinite(best) ? best : 0.0;
    }
    rep.isolated = rep.isolation_margin > opts.isolation_gap;
  }
  if (!rep.isolated) {
    rep.verdict = "no-verdict";
    rep.reason = "kernel pair not isolated";
    return rep;
  }

  // augmenting by ((x - x0).u)((x - x0).v) must restore semifreedom
  {
    Polynomial lu(f.n), lv(f.n);
    for (std::size_t i = 0; i < f.n; ++i) {
      Polynomial xi = Polynomial::variable(f.n, i) - Polynomial::constant(f.n, from_double(x0[i]));
      lu += from_double(rep.u[i]) * xi;
      lv += from_double(rep.v[i]) * xi;
    }
    std::vector<Polynomial> comps = f.components;
    comps.push_back(lu * lv);
    PolyMap aug(f.n, std::move(comps), f.mode, f.domain);
    SFFData s2 = second_fundamental_form(aug, x0);
    Certificate c2 = certify_nonsingular(s2.form, Budget{50000, 60, 60.0, 1});
    rep.restored_semifree = c2.verdict == Verdict::certified;
  }

  // adapted frame T = [u, v, orthonormal complement]
  Eigen::MatrixXd t(n, n);
  t.col(0) = u;
  t.col(1) = v;
  if (n > 2) {
    Eigen::MatrixXd uv(2, n);
    uv.row(0) = u.transpose();
    uv.row(1) = v.transpose();
    t.rightCols(n - 2) = null_space(uv, 1e-12);
  }
  Eigen::MatrixXd d = jets.d1(x0);
  auto h = jets.d2(x0);
  auto t3 = jets.d3(x0);
  auto second = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd s(q);
    for (Eigen::Index k = 0; k < q; ++k) s(k) = a.dot(h[static_cast<std::size_t>(k)] * b);
    return s;
  };
  auto third = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c3) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(q);
    for (Eigen::Index k = 0; k < q; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          for (Eigen::Index l = 0; l < n; ++l) s(k) += t3[static_cast<std::size_t>(k)][static_cast<std::size_t>((i * n + j) * n + l)] * a(i) * b(j) * c3(l);
        }
      }
    }
    return s;
  };
  auto margin = [&](int i) {
    int partner = 1 - i;
    std::vector<Eigen::VectorXd> cols;
    for (Eigen::Index j = 0; j < n; ++j) cols.push_back(d * t.col(j));
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != partner) cols.push_back(second(t.col(i), t.col(k)));
    }
    for (Eigen::Index l = 0; l < n; ++l) cols.push_back(third(t.col(0), t.col(1), t.col(l)));
    Eigen::MatrixXd m(q, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c4 = 0; c4 < cols.size(); ++c4) {
      double nrm = cols[c4].norm();
      m.col(static_cast<Eigen::Index>(c4)) = nrm > 0.0 ? Eigen::VectorXd(cols[c4] / nrm) : cols[c4];
    }
    return sigma_min(m);
  };
  rep.independence_margin_1 = margin(0);
  rep.independence_margin_2 = margin(1);
  rep.independent = rep.independence_margin_1 > opts.tol && rep.independence_margin_2 > opts.tol;

  if (rep.restored_semifree && rep.independent) {
    rep.verdict = "cubic";
    rep.reason = "mixed kernel direction, restored by the mixed quadratic, independent cubic partials";
  } else {
    rep.verdict = "non-cubic";
    rep.reason = !rep.restored_semifree ? "augmenting by the mixed quadratic does not restore semifreedom"
                                        : "second and third partials are linearly dependent";
  }
  return rep;
}

namespace {

bool node_ok(const Eigen::VectorXd& z, Eigen::Index n, const TraceOptions& o) {
  Eigen::VectorXd x = z.head(n), y = z.segment(n, n);
  if ((x - y).norm() < o.min_separation) return false;
  if (x.norm() > o.max_norm || y.norm() > o.max_norm) return false;
  if (o.box) {
    std::span<const double> xs(x.data(), static_cast<std::size_t>(n)), ys(y.data(), static_cast<std::size_t>(n));
    if (!o.box->contains(xs) || !o.box->contains(ys)) return false;
  }
  return true;
}

TraceNode make_node(const MapJets& jets, const Eigen::VectorXd& z) {
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  TraceNode nd;
  nd.x.assign(z.data(), z.data() + n);
  nd.y.assign(z.data() + n, z.data() + 2 * n);
  nd.u.assign(z.data() + 2 * n, z.data() + 3 * n);
  nd.v.assign(z.data() + 3 * n, z.data() + 4 * n);
  Eigen::VectorXd F;
  Eigen::MatrixXd J;
  double_parallel_system(jets, z, F, J);
  nd.residual = F.head(q).norm();
  nd.sigma = sigma_min(pair_matrix(jets, nd.x, nd.y));
  return nd;
}

}  // namespace

TraceResult trace_sigma(const PolyMap& f, std::span<const double> x0, std::span<const double> y0, int steps, double h,
                        const TraceOptions& opts) {
  MapJets jets(f);
  auto n = static_cast<Eigen::Index>(f.n);
  TraceResult tr;
  DoubleParallelOptions dpo;
  dpo.min_separation = opts.min_separation;
  DoubleParallel seed = double_parallel_witness(jets, x0, y0, dpo);
  if (!seed.converged) {
    tr.status = "empty";
    return tr;
  }
  Eigen::VectorXd z0(4 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto s = static_cast<std::size_t>(i);
    z0(i) = seed.x[s];
    z0(n + i) = seed.y[s];
    z0(2 * n + i) = seed.u[s];
    z0(3 * n + i) = seed.v[s];
  }
  auto null_at = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd F;
    Eigen::MatrixXd J;
    double_parallel_system(jets, z, F, J);
    return Eigen::MatrixXd(null_space(J, 1e-9));
  };
  ResidualFn fn = [&](const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J) { double_parallel_system(jets, z, F, J); };
  NewtonOptions po;
  po.tol = opts.corrector_tol;
  po.max_iter = 100;

  // Where the linearization keeps a second null direction w, F alone vanishes only
  // to third order off the locus. Adding J(z) w = 0 (w unit, w orthogonal to the
  // tangent) lowers that to second order, which double precision can resolve.
  auto polish_degenerate = [&](const Eigen::VectorXd& z1, const Eigen::VectorXd& tan) -> Eigen::VectorXd {
    Eigen::MatrixXd ns1 = null_at(z1);
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(z1.size());
    for (Eigen::Index c = 0; c < ns1.cols(); ++c) {
      Eigen::VectorXd v = ns1.col(c) - tan * tan.dot(ns1.col(c));
      if (v.norm() > w0.norm()) w0 = v;
    }
    if (w0.norm() < 1e-6) return z1;
    w0.normalize();
    const Eigen::Index m = z1.size();
    ResidualFn g = [&](const Eigen::VectorXd& zw, Eigen::VectorXd& F, Eigen::MatrixXd& J) {
      Eigen::VectorXd z = zw.head(m), w = zw.tail(m);
      Eigen::VectorXd f0;
      Eigen::MatrixXd j0;
      fn(z, f0, j0);
      const Eigen::Index r = f0.size();
      F.resize(2 * r + 3);
      J = Eigen::MatrixXd::Zero(2 * r + 3, 2 * m);
      F.head(r) = f0;
      J.topLeftCorner(r, m) = j0;
      F.segment(r, r) = j0 * w;
      J.block(r, m, r, m) = j0;
      const double eps = 1e-4;  // entries of J are at most quadratic in z
      for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::VectorXd zp = z, zm = z, fp, fm;
        Eigen::MatrixXd jp, jm;
        zp(k) += eps;
        zm(k) -= eps;
        fn(zp, fp, jp);
        fn(zm, fm, jm);
        J.block(r, k, r, 1) = (jp - jm) * w / (2.0 * eps);
      }
      F(2 * r) = 0.5 * (w.squaredNorm() - 1.0);
      J.block(2 * r, m, 1, m) = w.transpose();
      F(2 * r + 1) = tan.dot(w);
      J.block(2 * r + 1, m, 1, m) = tan.transpose();
      F(2 * r + 2) = tan.dot(z - z1);
      J.block(2 * r + 2, 0, 1, m) = tan.transpose();
    };
    Eigen::VectorXd zw(2 * m);
    zw << z1, w0;
    NewtonOptions o;
    o.tol = 1e-17;
    o.max_iter = 80;
    o.rank_eps = 1e-13;
    NewtonResult pr = closest_point(g, zw, o);
    Eigen::VectorXd z2 = pr.z.head(m);
    return residual_norm(fn, z2) <= std::max(residual_norm(fn, z1), 1e-14) ? z2 : z1;
  };

  Eigen::MatrixXd ns = null_at(z0);
  tr.null_dimension = static_cast<int>(ns.cols());
  Eigen::VectorXd t0;
  if (ns.cols() == 1) {
    t0 = ns.col(0);
    tr.locus_dimension = 1;
  } else if (ns.cols() > 1) {
    // Degenerate linearization: probe the null directions and keep those whose
    // predicted point projects back onto the locus at second order.
    std::vector<Eigen::VectorXd> dirs;
    if (ns.cols() == 2) {
      for (int j = 0; j < 36; ++j) {
        double th = std::numbers::pi * j / 36.0;
        dirs.push_back(std::cos(th) * ns.col(0) + std::sin(th) * ns.col(1));
      }
    } else {
      std::mt19937_64 rng(0x7aceULL);
      std::normal_distribution<double> gauss;
      for (int j = 0; j < 64; ++j) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(ns.rows());
        for (Eigen::Index c = 0; c < ns.cols(); ++c) d += gauss(rng) * ns.col(c);
        dirs.push_back(d.normalized());
      }
    }
    std::vector<std::pair<double, Eigen::VectorXd>> probes;  // (ratio, secant)
    for (const auto& d : dirs) {
      Eigen::VectorXd pred = z0 + h * d;
      NewtonResult nr = closest_point(fn, pred, po);
      if (residual_norm(fn, nr.z) > 1e-9) continue;
      Eigen::VectorXd sec = nr.z - z0;
      if (sec.norm() < 0.1 * h) continue;
      probes.push_back({(nr.z - pred).norm() / h, sec.normalized()});
    }
    auto best = std::min_element(probes.begin(), probes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (best == probes.end() || best->first > 0.1) {
      tr.status = "locus-dimension";
      tr.locus_dimension = 0;
    } else {
      tr.locus_dimension = 1;
      for (const auto& pr : probes) {
        if (pr.first < 0.1 && std::fabs(pr.second.dot(best->second)) < 0.5) tr.locus_dimension = 2;
      }
      t0 = best->second;
    }
  }
  if (tr.locus_dimension != 1) {
    tr.status = "locus-dimension";
    tr.nodes.push_back(make_node(jets, z0));
    tr.projection.push_back(tr.nodes.back().x);
    return tr;
  }
  tr.status = "ok";

  auto run = [&](double dir) {
    std::vector<Eigen::VectorXd> out;
    Eigen::VectorXd z = z0;
    Eigen::VectorXd t = dir * t0;
    double step = h;
    for (int s = 0; s < steps; ++s) {
      bool ok = false;
      Eigen::VectorXd zn;
      while (step >= opts.min_step) {
        Eigen::VectorXd pred = z + step * t;
        // corrector: Newton on F = 0 plus the arclength hyperplane t.(z - pred) = 0
        ResidualFn aug = [&](const Eigen::VectorXd& w, Eigen::VectorXd& F, Eigen::MatrixXd& J) {
          Eigen::VectorXd f0;
          Eigen::MatrixXd j0;
          fn(w, f0, j0);
          F.resize(f0.size() + 1);
          F.head(f0.size()) = f0;
          F(f0.size()) = t.dot(w - pred);
          J.resize(j0.rows() + 1, j0.cols());
          J.topRows(j0.rows()) = j0;
          J.row(j0.rows()) = t.transpose();
        };
        NewtonResult nr = closest_point(aug, pred, po);
        if ((nr.converged || nr.residual < 1e-12) && null_at(nr.z).cols() > 1) nr.z = polish_degenerate(nr.z, t);
        bool settled = nr.converged || nr.residual < 1e-12;
        if (settled && (nr.z - z).norm() < 2.0 * step) {
          zn = nr.z;
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) {
        if (out.empty() && dir > 0) tr.status = "corrector-divergence";
        break;
      }
      if (!node_ok(zn, n, opts)) break;
      // tangent: the null vector where the linearization is regular, else the secant
      Eigen::MatrixXd ns2 = null_at(zn);
      Eigen::VectorXd t2 = (zn - z).normalized();
      if (ns2.cols() == 1) {
        t2 = ns2.col(0);
        if (t2.dot(t) < 0) t2 = -t2;
      } else if (ns2.cols() == 0) {
        break;
      }
      z = zn;
      t = t2;
      out.push_back(z);
      step = std::min(h, 2.0 * step);
    }
    return out;
  };
  auto back = run(-1.0);
  auto fwd = run(1.0);
  std::vector<Eigen::VectorXd> all(back.rbegin(), back.rend());
  all.push_back(z0);
  all.insert(all.end(), fwd.begin(), fwd.end());
  for (const auto& z : all) {
    tr.nodes.push_back(make_node(jets, z));
    tr.projection.push_back(tr.nodes.back().x);
  }
  return tr;
}

std::string trace_svg(const std::vector<TraceResult>& curves, int width, int height) {
  // plot the first-factor projection; 1D domains show (x, y) pairs instead
  auto coords = [](const TraceNode& nd) -> std::pair<double, double> {
    if (nd.x.size() >= 2) return {nd.x[0], nd.x[1]};
    return {nd.x[0], nd.y[0]};
  };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : curves) {
    for (const auto& nd : c.nodes) {
      auto [a, b] = coords(nd);
      xmin = std::min(xmin, a);
      xmax = std::max(xmax, a);
      ymin = std::min(ymin, b);
      ymax = std::max(ymax, b);
    }
  }
  if (xmin > xmax) xmin = ymin = -1.0, xmax = ymax = 1.0;
  double span = std::max({xmax - xmin, ymax - ymin, 1e-9}) * 1.1;
  double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  auto px = [&](double a) { return width * (0.5 + (a - cx) / span); };
  auto py = [&](double b) { return height * (0.5 - (b - cy) / span); };
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t ci = 0;
  for (const auto& c : curves) {
    const char* col = colors[ci++ % 4];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (const auto& nd : c.nodes) {
      auto [a, b] = coords(nd);
      os << px(a) << ',' << py(b) << ' ';
    }
    os << "\"/>\n";
    std::size_t stride = std::max<std::size_t>(1, c.nodes.size() / 12);
    for (std::size_t i = 0; i < c.nodes.size(); i += stride) {
      const auto& nd = c.nodes[i];
      auto [a, b] = coords(nd);
      double ua = nd.u.size() >= 2 ? nd.u[0] : nd.u[0];
      double ub = nd.u.size() >= 2 ? nd.u[1] : 0.0;
      double len = 0.04 * span;
      os << "<line stroke=\"" << col << "\" stroke-width=\"1\" x1=\"" << px(a) << "\" y1=\"" << py(b) << "\" x2=\""
         << px(a + len * ua) << "\" y2=\"" << py(b + len * ub) << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace tnlab
