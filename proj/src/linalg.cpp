// SPDX-License-Identifier: Apache-2.0
#include "tnlab/linalg.hpp"

#include <cmath>
#include <limits>

namespace tnlab {

IntervalMatrix IntervalMatrix::point(const Eigen::MatrixXd& m) {
  IntervalMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Interval(m(i, j));
  }
  return r;
}

Eigen::MatrixXd IntervalMatrix::mid() const {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).mid();
  }
  return m;
}

Eigen::MatrixXd IntervalMatrix::rad() const {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Interval& v = (*this)(i, j);
      double c = v.mid();
      m(i, j) = round_up(std::max(v.hi - c, c - v.lo));
    }
  }
  return m;
}

IntervalMatrix hcat(const IntervalMatrix& a, const IntervalMatrix& b) {
  IntervalMatrix r(a.rows, a.cols + b.cols);
  for (Eigen::Index i = 0; i < a.rows; ++i) {
    for (Eigen::Index j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
    for (Eigen::Index j = 0; j < b.cols; ++j) r(i, a.cols + j) = b(i, j);
  }
  return r;
}

IntervalMatrix intersect(const IntervalMatrix& a, const IntervalMatrix& b) {
  IntervalMatrix r(a.rows, a.cols);
  for (std::size_t k = 0; k < a.data.size(); ++k) r.data[k] = intersect(a.data[k], b.data[k]);
  return r;
}

double sigma_min(const Eigen::MatrixXd& a) {
  if (a.cols() == 0) return std::numeric_limits<double>::infinity();
  if (a.rows() < a.cols()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(a.cols() - 1);
}

int numerical_rank(const Eigen::MatrixXd& a, double eps) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) >= eps * s(0)) ++r;
  }
  return r;
}

double spectral_norm_upper(const Eigen::MatrixXd& r) {
  double fro = 0.0;
  double row_max = 0.0, col_max = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      s = round_up(s + r(i, j));
      fro = round_up(fro + round_up(r(i, j) * r(i, j)));
    }
    row_max = std::max(row_max, s);
  }
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i) s = round_up(s + r(i, j));
    col_max = std::max(col_max, s);
  }
  double a = round_up(std::sqrt(fro));
  double b = round_up(std::sqrt(round_up(row_max * col_max)));
  return std::min(a, b);
}

double sigma_min_lower(const IntervalMatrix& m) {
  if (m.rows < m.cols) return 0.0;
  Eigen::MatrixXd c = m.mid();
  double s = sigma_min(c);
  // backward error of the floating SVD is a small multiple of eps * |c|
  double guard = 16.0 * static_cast<double>(m.rows + m.cols) * std::numeric_limits<double>::epsilon() * c.norm() +
                 std::numeric_limits<double>::min();
  double lb = round_down(round_down(s - spectral_norm_upper(m.rad())) - guard);
  return std::max(0.0, lb);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double eps) {
  Eigen::Index n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (smax > 0.0 && s(i) >= eps * smax) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

Eigen::VectorXd smallest_right_singular_vector(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().col(a.cols() - 1);
}

}  // namespace tnlab
