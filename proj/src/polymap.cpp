// SPDX-License-Identifier: Apache-2.0
#include "tnlab/polymap.hpp"

#include <cmath>
#include <stdexcept>

namespace tnlab {

Box Box::cube(std::size_t n, double lo, double hi) { return Box(std::vector<Interval>(n, Interval(lo, hi))); }

std::vector<double> Box::center() const {
  std::vector<double> c;
  c.reserve(sides.size());
  for (const auto& s : sides) c.push_back(s.mid());
  return c;
}

std::vector<double> Box::radius() const {
  std::vector<double> r;
  r.reserve(sides.size());
  for (const auto& s : sides) r.push_back(round_up(std::max(s.hi - s.mid(), s.mid() - s.lo)));
  return r;
}

double Box::diameter() const {
  double s = 0.0;
  for (const auto& i : sides) s += i.width() * i.width();
  return std::sqrt(s);
}

std::size_t Box::widest() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sides.size(); ++i) {
    if (sides[i].width() > sides[best].width()) best = i;
  }
  return best;
}

std::pair<Box, Box> Box::bisect(std::size_t i) const {
  Box a = *this, b = *this;
  double m = sides[i].mid();
  a.sides[i].hi = m;
  b.sides[i].lo = m;
  return {std::move(a), std::move(b)};
}

bool Box::contains(std::span<const double> x, double slack) const {
  if (x.size() != sides.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < sides[i].lo - slack || x[i] > sides[i].hi + slack) return false;
  }
  return true;
}

PolyMap::PolyMap(std::size_t n_, std::vector<Polynomial> comps, CoeffMode m, DomainKind d)
    : n(n_), q(comps.size()), components(std::move(comps)), mode(m), domain(d) {
  validate();
}

int PolyMap::degree() const {
  int d = -1;
  for (const auto& c : components) d = std::max(d, c.degree());
  return d;
}

void PolyMap::validate() const {
  if (components.size() != q) throw std::invalid_argument("component count differs from q");
  if (domain == DomainKind::circle && n != 2) throw std::invalid_argument("circle-domain maps use the two variables (c, s)");
  for (const auto& c : components) {
    if (c.nvars() != n) throw std::invalid_argument("component lives in a ring of the wrong dimension");
  }
}

PolyMap PolyMap::partial(std::size_t i) const {
  PolyMap r = *this;
  for (auto& c : r.components) c = c.derivative(i);
  return r;
}

bool PolyMap::is_graph() const {
  if (domain != DomainKind::box || q < n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(components[i] == Polynomial::variable(n, i))) return false;
  }
  return true;
}

PolyMap PolyMap::graph_tail() const {
  PolyMap r;
  r.n = n;
  r.q = q - n;
  r.components.assign(components.begin() + static_cast<std::ptrdiff_t>(n), components.end());
  r.mode = mode;
  r.domain = domain;
  return r;
}

std::vector<Rational> eval_exact(const PolyMap& f, std::span<const Rational> x) {
  if (x.size() != f.n) throw std::invalid_argument("eval: point dimension differs from domain dimension");
  std::vector<Rational> out;
  out.reserve(f.q);
  for (const auto& c : f.components) out.push_back(c.eval(x));
  return out;
}

std::vector<double> eval(const PolyMap& f, std::span<const double> x) {
  if (x.size() != f.n) throw std::invalid_argument("eval: point dimension differs from domain dimension");
  std::vector<Rational> xr;
  xr.reserve(x.size());
  for (double v : x) xr.push_back(from_double(v));
  std::vector<double> out;
  out.reserve(f.q);
  for (const auto& c : f.components) out.push_back(to_double_nearest(c.eval(xr)));
  return out;
}

Jet2 jet2(const PolyMap& f, std::span<const double> x) {
  if (x.size() != f.n) throw std::invalid_argument("jet2: point dimension differs from domain dimension");
  std::vector<Rational> xr;
  for (double v : x) xr.push_back(from_double(v));
  Jet2 j;
  j.point.assign(x.begin(), x.end());
  j.value.resize(static_cast<Eigen::Index>(f.q));
  j.d1.resize(static_cast<Eigen::Index>(f.q), static_cast<Eigen::Index>(f.n));
  j.d2.assign(f.q, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f.n), static_cast<Eigen::Index>(f.n)));
  for (std::size_t k = 0; k < f.q; ++k) {
    const auto& p = f.components[k];
    auto K = static_cast<Eigen::Index>(k);
    j.value(K) = to_double_nearest(p.eval(xr));
    for (std::size_t i = 0; i < f.n; ++i) {
      Polynomial pi = p.derivative(i);
      auto I = static_cast<Eigen::Index>(i);
      j.d1(K, I) = to_double_nearest(pi.eval(xr));
      for (std::size_t l = i; l < f.n; ++l) {
        double v = to_double_nearest(pi.derivative(l).eval(xr));
        auto L = static_cast<Eigen::Index>(l);
        j.d2[k](I, L) = v;
        j.d2[k](L, I) = v;
      }
    }
  }
  return j;
}

namespace {

// Sorted index tuples i_1 <= ... <= i_order together with the number of
// ordered tuples they represent.
void sorted_tuples(std::size_t n, int order, std::size_t start, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
  if (static_cast<int>(cur.size()) == order) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    sorted_tuples(n, order, i, cur, out);
    cur.pop_back();
  }
}

double multiplicity(const std::vector<std::size_t>& t) {
  double m = 1.0;
  for (std::size_t k = 2; k <= t.size(); ++k) m *= static_cast<double>(k);
  std::size_t run = 1;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    if (i < t.size() && t[i] == t[i - 1]) {
      ++run;
    } else {
      for (std::size_t k = 2; k <= run; ++k) m /= static_cast<double>(k);
      run = 1;
    }
  }
  return m;
}

}  // namespace

double derivative_bound(const PolyMap& f, const Box& box, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("derivative_bound: unsupported order");
  double sum = 0.0;
  if (f.domain == DomainKind::circle) {
    if (box.dim() != 1) throw std::invalid_argument("derivative_bound: circle domain expects an angle interval");
    PolyMap d = circle_derivative(f, order);
    std::vector<Interval> cs = {cos(box.sides[0]), sin(box.sides[0])};
    for (const auto& c : d.components) {
      double m = CompiledPolynomial(c).eval(cs).mag();
      sum = round_up(sum + round_up(m * m));
    }
    return sum == 0.0 ? 0.0 : round_up(std::sqrt(sum));
  }
  if (box.dim() != f.n) throw std::invalid_argument("derivative_bound: box dimension differs from domain dimension");
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> cur;
  sorted_tuples(f.n, order, 0, cur, tuples);
  for (const auto& c : f.components) {
    for (const auto& t : tuples) {
      Polynomial d = c;
      for (std::size_t i : t) d = d.derivative(i);
      if (d.is_zero()) continue;
      double m = CompiledPolynomial(d).eval(box.sides).mag();
      sum = round_up(sum + round_up(multiplicity(t) * round_up(m * m)));
    }
  }
  return sum == 0.0 ? 0.0 : round_up(std::sqrt(sum));
}

PolyMap graph(const PolyMap& Q) {
  std::vector<Polynomial> comps = variables(Q.n);
  comps.insert(comps.end(), Q.components.begin(), Q.components.end());
  return PolyMap(Q.n, std::move(comps), Q.mode, Q.domain);
}

PolyMap sum_map(const PolyMap& f, std::size_t k) {
  if (k == 0) throw std::invalid_argument("sum_map: k must be positive");
  std::size_t N = k * f.n;
  std::vector<Polynomial> comps(f.q, Polynomial(N));
  std::vector<Polynomial> all = variables(N);
  for (std::size_t b = 0; b < k; ++b) {
    std::span<const Polynomial> sub(all.data() + b * f.n, f.n);
    for (std::size_t c = 0; c < f.q; ++c) comps[c] += f.components[c].substitute(sub);
  }
  return PolyMap(N, std::move(comps), f.mode, DomainKind::box);
}

PolyMap circle_derivative(const PolyMap& f, int order) {
  if (f.domain != DomainKind::circle) throw std::invalid_argument("circle_derivative: map is not on a circle domain");
  Polynomial c = Polynomial::variable(2, 0), s = Polynomial::variable(2, 1);
  PolyMap r = f;
  for (int k = 0; k < order; ++k) {
    for (auto& p : r.components) p = c * p.derivative(1) - s * p.derivative(0);
  }
  return r;
}

std::vector<Polynomial> variables(std::size_t n) {
  std::vector<Polynomial> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(Polynomial::variable(n, i));
  return v;
}

}  // namespace tnlab
