// SPDX-License-Identifier: Apache-2.0
#include "tnlab/jet_engine.hpp"

#include <algorithm>
#include <array>

namespace tnlab {

MapJets::MapJets(const PolyMap& f) : n_(f.n), q_(f.q), degree_(f.degree()) {
  f1_.resize(q_ * n_);
  f2_.resize(q_ * n_ * n_);
  f3_.resize(q_ * n_ * n_ * n_);
  for (std::size_t k = 0; k < q_; ++k) {
    const Polynomial& p = f.components[k];
    f_.emplace_back(p);
    for (std::size_t i = 0; i < n_; ++i) {
      Polynomial pi = p.derivative(i);
      f1_[k * n_ + i] = CompiledPolynomial(pi);
      for (std::size_t j = i; j < n_; ++j) {
        Polynomial pij = pi.derivative(j);
        f2_[(k * n_ + i) * n_ + j] = CompiledPolynomial(pij);
        for (std::size_t l = j; l < n_; ++l) f3_[((k * n_ + i) * n_ + j) * n_ + l] = CompiledPolynomial(pij.derivative(l));
      }
    }
  }
  for (const auto& c : f_) max_exp_ = std::max(max_exp_, c.max_exponent());
}

Eigen::VectorXd MapJets::value(std::span<const double> x) const {
  auto pw = make_power_table(x, max_exp_);
  Eigen::VectorXd v(static_cast<Eigen::Index>(q_));
  for (std::size_t k = 0; k < q_; ++k) v(static_cast<Eigen::Index>(k)) = f_[k].eval(pw);
  return v;
}

Eigen::MatrixXd MapJets::d1(std::span<const double> x) const {
  auto pw = make_power_table(x, max_exp_);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(q_), static_cast<Eigen::Index>(n_));
  for (std::size_t k = 0; k < q_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = f1_[k * n_ + i].eval(pw);
  }
  return m;
}

std::vector<Eigen::MatrixXd> MapJets::d2(std::span<const double> x) const {
  auto pw = make_power_table(x, max_exp_);
  auto N = static_cast<Eigen::Index>(n_);
  std::vector<Eigen::MatrixXd> out(q_, Eigen::MatrixXd(N, N));
  for (std::size_t k = 0; k < q_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        double v = f2_[(k * n_ + i) * n_ + j].eval(pw);
        out[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        out[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> MapJets::d3(std::span<const double> x) const {
  auto pw = make_power_table(x, max_exp_);
  std::vector<std::vector<double>> out(q_, std::vector<double>(n_ * n_ * n_));
  for (std::size_t k = 0; k < q_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        for (std::size_t l = j; l < n_; ++l) {
          double v = f3_[((k * n_ + i) * n_ + j) * n_ + l].eval(pw);
          std::array<std::size_t, 3> t{i, j, l};
          // scatter to all orderings
          std::sort(t.begin(), t.end());
          do {
            out[k][(t[0] * n_ + t[1]) * n_ + t[2]] = v;
          } while (std::next_permutation(t.begin(), t.end()));
        }
      }
    }
  }
  return out;
}

Jet2 MapJets::jet(std::span<const double> x) const {
  Jet2 j;
  j.point.assign(x.begin(), x.end());
  j.value = value(x);
  j.d1 = d1(x);
  j.d2 = d2(x);
  return j;
}

IntervalMatrix MapJets::d1(const Box& box) const {
  auto pw = make_power_table(box.sides, max_exp_);
  auto Q = static_cast<Eigen::Index>(q_), N = static_cast<Eigen::Index>(n_);
  IntervalMatrix nat(Q, N);
  for (std::size_t k = 0; k < q_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) nat(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = f1_[k * n_ + i].eval(pw);
  }
  if (degree_ <= 2) return nat;  // df is affine: the natural form is already sharp enough

  // mean-value form about the center
  std::vector<double> c = box.center();
  std::vector<Interval> cpt(c.begin(), c.end());
  auto pc = make_power_table(cpt, max_exp_);
  std::vector<Interval> dx(n_);
  for (std::size_t l = 0; l < n_; ++l) dx[l] = box.sides[l] - Interval(c[l]);
  IntervalMatrix mv(Q, N);
  for (std::size_t k = 0; k < q_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      Interval s = f1_[k * n_ + i].eval(pc);
      for (std::size_t l = 0; l < n_; ++l) s += f2_[k * n_ * n_ + idx2(i, l)].eval(pw) * dx[l];
      mv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = s;
    }
  }
  return intersect(nat, mv);
}

std::vector<IntervalMatrix> MapJets::d2(const Box& box) const {
  auto pw = make_power_table(box.sides, max_exp_);
  auto N = static_cast<Eigen::Index>(n_);
  std::vector<IntervalMatrix> out(q_, IntervalMatrix(N, N));
  for (std::size_t k = 0; k < q_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        Interval v = f2_[(k * n_ + i) * n_ + j].eval(pw);
        out[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        out[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
  }
  return out;
}

IntervalMatrix MapJets::hessian_apply(const Box& box, std::span<const Interval> dir) const {
  auto h = d2(box);
  auto Q = static_cast<Eigen::Index>(q_), N = static_cast<Eigen::Index>(n_);
  IntervalMatrix m(Q, N);
  for (Eigen::Index k = 0; k < Q; ++k) {
    for (Eigen::Index j = 0; j < N; ++j) {
      Interval s(0.0);
      for (Eigen::Index i = 0; i < N; ++i) s += dir[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(k)](i, j);
      m(k, j) = s;
    }
  }
  return m;
}

}  // namespace tnlab
