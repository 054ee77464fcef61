// SPDX-License-Identifier: Apache-2.0
#include "tnlab/newton.hpp"

#include <cmath>

namespace tnlab {

double residual_norm(const ResidualFn& fn, const Eigen::VectorXd& z) {
  Eigen::VectorXd F;
  Eigen::MatrixXd J;
  fn(z, F, J);
  return F.norm();
}

namespace {

struct Decomp {
  Eigen::MatrixXd U, V;
  Eigen::VectorXd s;
  Eigen::Index rank = 0;
};

Decomp decompose(const Eigen::MatrixXd& J, double eps) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Decomp d{svd.matrixU(), svd.matrixV(), svd.singularValues(), 0};
  double smax = d.s.size() > 0 ? d.s(0) : 0.0;
  for (Eigen::Index i = 0; i < d.s.size(); ++i) {
    if (d.s(i) > 0.0 && d.s(i) > eps * smax) ++d.rank;
  }
  return d;
}

// Min-norm Gauss-Newton onto {F = 0}; returns the final residual.
double project(const ResidualFn& fn, Eigen::VectorXd& z, const NewtonOptions& o, int& iters) {
  Eigen::VectorXd F, Fn;
  Eigen::MatrixXd J, Jn;
  fn(z, F, J);
  double res = F.norm();
  while (iters < o.max_iter && res > o.tol) {
    ++iters;
    Decomp d = decompose(J, o.rank_eps);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(z.size());
    for (Eigen::Index i = 0; i < d.rank; ++i) step -= d.V.col(i) * (d.U.col(i).dot(F) / d.s(i));
    double sn = step.norm();
    if (sn > o.max_step) step *= o.max_step / sn;
    bool ok = false;
    double alpha = 1.0;
    Eigen::VectorXd zn;
    for (int h = 0; h < 40; ++h, alpha *= 0.5) {
      zn = z + alpha * step;
      fn(zn, Fn, Jn);
      double rn = Fn.norm();
      if (std::isfinite(rn) && rn < res) {
        ok = true;
        break;
      }
    }
    if (!ok) break;
    z = zn;
    F = Fn;
    J = Jn;
    res = F.norm();
  }
  return res;
}

}  // namespace

NewtonResult closest_point(const ResidualFn& fn, const Eigen::VectorXd& seed, const NewtonOptions& opts) {
  NewtonResult r;
  Eigen::VectorXd z = seed;
  int iters = 0;
  double res = project(fn, z, opts, iters);
  // slide along the solution set toward the seed
  for (int outer = 0; outer < 50 && res <= opts.tol && iters < opts.max_iter; ++outer) {
    Eigen::VectorXd F;
    Eigen::MatrixXd J;
    fn(z, F, J);
    Decomp d = decompose(J, opts.rank_eps);
    Eigen::VectorXd diff = z - seed;
    Eigen::VectorXd t = Eigen::VectorXd::Zero(z.size());
    for (Eigen::Index i = d.rank; i < d.V.cols(); ++i) t -= d.V.col(i) * d.V.col(i).dot(diff);
    if (t.norm() <= 1e-14 * (1.0 + z.norm())) break;
    bool moved = false;
    double alpha = 1.0;
    for (int h = 0; h < 20; ++h, alpha *= 0.5) {
      Eigen::VectorXd zt = z + alpha * t;
      int it2 = iters;
      double rt = project(fn, zt, opts, it2);
      if (rt <= opts.tol && (zt - seed).norm() < diff.norm()) {
        z = zt;
        res = rt;
        iters = it2;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  r.z = z;
  r.residual = res;
  r.iterations = iters;
  r.converged = res <= opts.tol;
  return r;
}

}  // namespace tnlab
