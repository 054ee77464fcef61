// SPDX-License-Identifier: Apache-2.0
#include "tnlab/tangency.hpp"

#include "tnlab/linalg.hpp"
#include "tnlab/newton.hpp"

#include <cmath>
#include <stdexcept>

namespace tnlab {

namespace {

bool same_point(std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return false;
  }
  return true;
}

}  // namespace

Eigen::MatrixXd pair_matrix(const MapJets& jets, std::span<const double> x, std::span<const double> y) {
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  Eigen::MatrixXd m(q, 2 * n);
  m.leftCols(n) = jets.d1(x);
  m.rightCols(n) = jets.d1(y);
  return m;
}

double pair_sigma_min(const MapJets& jets, std::span<const double> x, std::span<const double> y) {
  if (x.size() != jets.n() || y.size() != jets.n()) throw std::invalid_argument("pair_sigma_min: dimension mismatch");
  if (jets.q() < 2 * jets.n()) throw std::invalid_argument("pair_sigma_min: target dimension below 2n");
  if (same_point(x, y)) throw std::invalid_argument("pair_sigma_min: coincident points");
  return sigma_min(pair_matrix(jets, x, y));
}

double pair_sigma_min(const PolyMap& f, std::span<const double> x, std::span<const double> y) {
  return pair_sigma_min(MapJets(f), x, y);
}

Eigen::MatrixXd stacked_differential(const MapJets& jets, const std::vector<std::vector<double>>& points) {
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  Eigen::MatrixXd m(q, n * static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) m.middleCols(static_cast<Eigen::Index>(i) * n, n) = jets.d1(points[i]);
  return m;
}

int kfold_rank(const PolyMap& f, const std::vector<std::vector<double>>& points, double eps) {
  for (const auto& p : points) {
    if (p.size() != f.n) throw std::invalid_argument("kfold_rank: dimension mismatch");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (same_point(points[i], points[j])) throw std::invalid_argument("kfold_rank: duplicate points");
    }
  }
  return numerical_rank(stacked_differential(MapJets(f), points), eps);
}

Rational vandermonde_oracle(std::span<const Rational> xs) {
  Rational d = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) d *= xs[j] - xs[i];
  }
  return d;
}

double skew_residual(const PolyMap& loop, double s, double t) {
  if (loop.domain != DomainKind::circle || loop.q != 3) throw std::invalid_argument("skew_residual: expects a circle-domain loop in R^3");
  double d = std::remainder(s - t, 2.0 * std::acos(-1.0));
  if (d == 0.0) throw std::invalid_argument("skew_residual: coincident angles");
  PolyMap vel = circle_derivative(loop, 1);
  auto tangent = [&](double a) {
    std::vector<double> cs = {std::cos(a), std::sin(a)};
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k) v(k) = vel.components[static_cast<std::size_t>(k)].eval_fast(cs);
    return v;
  };
  return tangent(s).cross(tangent(t)).norm();
}

double scaled_parallel_tol(double tol, double sep, int degree) {
  return tol * std::pow(std::min(1.0, sep), std::max(0, degree - 1));
}

void double_parallel_system(const MapJets& jets, const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J) {
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  std::span<const double> x(z.data(), static_cast<std::size_t>(n)), y(z.data() + n, static_cast<std::size_t>(n));
  Eigen::VectorXd u = z.segment(2 * n, n), v = z.segment(3 * n, n);
  Eigen::MatrixXd dx = jets.d1(x), dy = jets.d1(y);
  auto hx = jets.d2(x), hy = jets.d2(y);
  F.resize(q + 1);
  F.head(q) = dx * u - dy * v;
  F(q) = 0.5 * (u.squaredNorm() + v.squaredNorm() - 2.0);
  J = Eigen::MatrixXd::Zero(q + 1, 4 * n);
  for (Eigen::Index k = 0; k < q; ++k) {
    J.block(k, 0, 1, n) = (hx[static_cast<std::size_t>(k)] * u).transpose();
    J.block(k, n, 1, n) = -(hy[static_cast<std::size_t>(k)] * v).transpose();
  }
  J.block(0, 2 * n, q, n) = dx;
  J.block(0, 3 * n, q, n) = -dy;
  J.block(q, 2 * n, 1, n) = u.transpose();
  J.block(q, 3 * n, 1, n) = v.transpose();
}

DoubleParallel double_parallel_witness(const MapJets& jets, std::span<const double> x0, std::span<const double> y0,
                                       std::span<const double> u0, std::span<const double> v0,
                                       const DoubleParallelOptions& opts) {
  auto n = static_cast<Eigen::Index>(jets.n()), q = static_cast<Eigen::Index>(jets.q());
  DoubleParallel out;
  Eigen::VectorXd z(4 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = x0[static_cast<std::size_t>(i)];
    z(n + i) = y0[static_cast<std::size_t>(i)];
    z(2 * n + i) = u0[static_cast<std::size_t>(i)];
    z(3 * n + i) = v0[static_cast<std::size_t>(i)];
  }
  double sc = std::sqrt(0.5 * (z.segment(2 * n, 2 * n).squaredNorm()));
  if (sc == 0.0) {
    out.report = "zero initial direction";
    return out;
  }
  z.segment(2 * n, 2 * n) /= sc;
  ResidualFn fn = [&](const Eigen::VectorXd& w, Eigen::VectorXd& F, Eigen::MatrixXd& J) { double_parallel_system(jets, w, F, J); };
  NewtonOptions no;
  no.tol = 0.01 * opts.tol;
  no.max_iter = opts.max_iter;
  NewtonResult nr = closest_point(fn, z, no);
  out.iterations = nr.iterations;
  z = nr.z;
  Eigen::VectorXd xs = z.head(n), ys = z.segment(n, n);
  if (!std::isfinite(z.norm())) {
    out.report = "no-convergence: divergence";
    return out;
  }
  if ((xs - ys).norm() < opts.min_separation) {
    out.report = "no-convergence: collapsed onto the diagonal";
    return out;
  }
  // canonical direction: project coordinate vectors onto the kernel of [df_x | -df_y]
  Eigen::MatrixXd k(q, 2 * n);
  std::span<const double> xsp(xs.data(), static_cast<std::size_t>(n)), ysp(ys.data(), static_cast<std::size_t>(n));
  k.leftCols(n) = jets.d1(xsp);
  k.rightCols(n) = -jets.d1(ysp);
  Eigen::MatrixXd ker = null_space(k, 1e-8);
  Eigen::VectorXd w = z.segment(2 * n, 2 * n);
  if (ker.cols() > 1) {
    for (Eigen::Index e = 0; e < 2 * n; ++e) {
      Eigen::VectorXd p = ker * ker.row(e).transpose();
      if (p.norm() > 1e-6) {
        w = p;
        break;
      }
    }
  }
  w *= std::sqrt(2.0) / w.norm();
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (std::fabs(w(i)) > 1e-12) {
      if (w(i) < 0) w = -w;
      break;
    }
  }
  z.segment(2 * n, 2 * n) = w;
  // re-polish in the chosen direction
  NewtonResult fin = closest_point(fn, z, no);
  z = fin.z;
  Eigen::VectorXd F;
  Eigen::MatrixXd J;
  double_parallel_system(jets, z, F, J);
  out.residual = F.head(q).norm();
  out.x.assign(z.data(), z.data() + n);
  out.y.assign(z.data() + n, z.data() + 2 * n);
  out.u.assign(z.data() + 2 * n, z.data() + 3 * n);
  out.v.assign(z.data() + 3 * n, z.data() + 4 * n);
  Eigen::VectorXd d = z.head(n) - z.segment(n, n);
  if (d.norm() < opts.min_separation) {
    out.report = "no-convergence: collapsed onto the diagonal";
  } else if (F.norm() < opts.tol) {
    out.converged = true;
    out.report = "converged";
  } else {
    out.report = "no-convergence: residual above tolerance";
  }
  return out;
}

DoubleParallel double_parallel_witness(const MapJets& jets, std::span<const double> x0, std::span<const double> y0,
                                       const DoubleParallelOptions& opts) {
  if (x0.size() != jets.n() || y0.size() != jets.n()) throw std::invalid_argument("double_parallel_witness: dimension mismatch");
  auto n = static_cast<Eigen::Index>(jets.n());
  Eigen::VectorXd w = smallest_right_singular_vector(pair_matrix(jets, x0, y0));
  Eigen::VectorXd u = w.head(n), v = -w.tail(n);
  return double_parallel_witness(jets, x0, y0, std::span<const double>(u.data(), static_cast<std::size_t>(n)),
                                 std::span<const double>(v.data(), static_cast<std::size_t>(n)), opts);
}

DoubleParallel double_parallel_witness(const PolyMap& f, std::span<const double> x0, std::span<const double> y0,
                                       const DoubleParallelOptions& opts) {
  return double_parallel_witness(MapJets(f), x0, y0, opts);
}

}  // namespace tnlab
