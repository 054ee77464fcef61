// SPDX-License-Identifier: Apache-2.0
#include "tnlab/symbil.hpp"

#include "tnlab/newton.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tnlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "Certified";
    case Verdict::refuted: return "Refuted";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

void SymBilinearMap::set(std::size_t k, std::size_t i, std::size_t j, const Rational& v) {
  coeffs[(k * n + i) * n + j] = v;
  coeffs[(k * n + j) * n + i] = v;
}

void SymBilinearMap::validate() const {
  if (coeffs.size() != n * n * p) throw std::invalid_argument("bilinear map: coefficient count differs from p*n*n");
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (at(k, i, j) != at(k, j, i)) throw std::invalid_argument("bilinear map: coefficients are not symmetric");
      }
    }
  }
}

Eigen::MatrixXd SymBilinearMap::slice(std::span<const double> x) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) += at(k, i, j).get_d() * x[i];
    }
  }
  return m;
}

std::vector<Rational> apply(const SymBilinearMap& b, std::span<const Rational> x, std::span<const Rational> y) {
  if (x.size() != b.n || y.size() != b.n) throw std::invalid_argument("apply: vector length differs from n");
  std::vector<Rational> out(b.p);
  for (std::size_t k = 0; k < b.p; ++k) {
    for (std::size_t i = 0; i < b.n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < b.n; ++j) out[k] += b.at(k, i, j) * x[i] * y[j];
    }
  }
  return out;
}

std::vector<double> apply(const SymBilinearMap& b, std::span<const double> x, std::span<const double> y) {
  if (x.size() != b.n || y.size() != b.n) throw std::invalid_argument("apply: vector length differs from n");
  std::vector<double> out(b.p, 0.0);
  for (std::size_t k = 0; k < b.p; ++k) {
    for (std::size_t i = 0; i < b.n; ++i) {
      for (std::size_t j = 0; j < b.n; ++j) out[k] += b.at(k, i, j).get_d() * x[i] * y[j];
    }
  }
  return out;
}

SymBilinearMap from_quadratic(const PolyMap& q) {
  SymBilinearMap b(q.n, q.q);
  for (std::size_t k = 0; k < q.q; ++k) {
    const Polynomial& c = q.components[k];
    if (!c.is_zero() && !c.is_homogeneous(2)) throw std::invalid_argument("from_quadratic: component is not a homogeneous quadratic");
    for (const auto& [m, coef] : c.terms()) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (unsigned e = 0; e < m[i]; ++e) idx.push_back(i);
      }
      if (idx[0] == idx[1]) {
        b.set(k, idx[0], idx[0], coef);
      } else {
        b.set(k, idx[0], idx[1], coef / 2);
      }
    }
  }
  return b;
}

PolyMap to_quadratic(const SymBilinearMap& b) {
  std::vector<Polynomial> comps(b.p, Polynomial(b.n));
  for (std::size_t k = 0; k < b.p; ++k) {
    for (std::size_t i = 0; i < b.n; ++i) {
      for (std::size_t j = i; j < b.n; ++j) {
        Rational c = i == j ? b.at(k, i, i) : Rational(2) * b.at(k, i, j);
        if (c == 0) continue;
        Monomial m(b.n, 0);
        ++m[i];
        ++m[j];
        comps[k].add_term(m, c);
      }
    }
  }
  return PolyMap(b.n, std::move(comps));
}

SymBilinearMap poly_mult(std::size_t n) {
  if (n < 1) throw std::invalid_argument("poly_mult: n must be at least 1");
  SymBilinearMap b(n, 2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b.set(i + j, i, j, Rational(1));
  }
  return b;
}

SymBilinearMap complex_mult(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("complex_mult: n must be even and at least 2");
  std::size_t m = n / 2;
  SymBilinearMap b(n, 2 * n - 2);
  // z_i = x_{2i} + i x_{2i+1}; output coefficient k has real part 2k, imaginary part 2k+1
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t k = i + j;
      std::size_t re = 2 * k, im = 2 * k + 1;
      // (a + ib)(c + id) = (ac - bd) + i(ad + bc), symmetrized over the two factors
      b.coeffs[(re * n + 2 * i) * n + 2 * j] += Rational(1);
      b.coeffs[(re * n + 2 * i + 1) * n + 2 * j + 1] -= Rational(1);
      b.coeffs[(im * n + 2 * i) * n + 2 * j + 1] += Rational(1);
      b.coeffs[(im * n + 2 * i + 1) * n + 2 * j] += Rational(1);
    }
  }
  return b;
}

namespace {

struct FaceRegion {
  std::size_t face = 0;
  Box box;  // full n-dimensional, with the face coordinate pinned to 1
};

class NonsingularSearch {
 public:
  NonsingularSearch(const SymBilinearMap& b, const NonsingularOptions& o) : b_(b), opts_(o) {
    enc_.reserve(b.coeffs.size());
    for (const auto& c : b.coeffs) {
      auto [lo, hi] = enclose(c);
      enc_.emplace_back(lo, hi);
      dc_.push_back(to_double_nearest(c));
    }
  }

  Eigen::MatrixXd slice(std::span<const double> x) const {
    std::size_t n = b_.n, p = b_.p;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) += dc_[(k * n + i) * n + j] * x[i];
      }
    }
    return m;
  }

  RegionEval evaluate(const FaceRegion& r) const {
    RegionEval e;
    std::size_t n = b_.n, p = b_.p;
    IntervalMatrix m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        Interval s(0.0);
        for (std::size_t i = 0; i < n; ++i) s += r.box.sides[i] * enc_[(k * n + i) * n + j];
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = s;
      }
    }
    double xmax = norm_upper(r.box.sides);
    double sl = sigma_min_lower(m);
    e.lower = sl > 0.0 ? std::max(0.0, round_down(sl / xmax)) : 0.0;
    std::vector<double> c = r.box.center();
    double cn = 0.0;
    for (double v : c) cn += v * v;
    e.estimate = sigma_min(slice(c)) / std::sqrt(cn);
    return e;
  }

  std::vector<FaceRegion> split(const FaceRegion& r) const {
    std::size_t best = r.face;
    double w = -1.0;
    for (std::size_t i = 0; i < b_.n; ++i) {
      if (i != r.face && r.box.sides[i].width() > w) {
        w = r.box.sides[i].width();
        best = i;
      }
    }
    if (w <= 0.0) return {r};
    auto [a, c] = r.box.bisect(best);
    return {FaceRegion{r.face, std::move(a)}, FaceRegion{r.face, std::move(c)}};
  }

  std::optional<Witness> refute(const FaceRegion& r, const RegionEval&) {
    std::vector<double> x = r.box.center();
    Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    xv.normalize();
    Eigen::VectorXd y = smallest_right_singular_vector(slice(x));
    return polish(xv, y);
  }

  std::optional<Witness> polish(const Eigen::VectorXd& x0, const Eigen::VectorXd& y0) const {
    auto n = static_cast<Eigen::Index>(b_.n), p = static_cast<Eigen::Index>(b_.p);
    ResidualFn fn = [&](const Eigen::VectorXd& z, Eigen::VectorXd& F, Eigen::MatrixXd& J) {
      std::span<const double> x(z.data(), static_cast<std::size_t>(n)), y(z.data() + n, static_cast<std::size_t>(n));
      Eigen::MatrixXd mx = slice(x), my = slice(y);
      F.resize(p + 2);
      F.head(p) = mx * z.tail(n);
      F(p) = 0.5 * (z.head(n).squaredNorm() - 1.0);
      F(p + 1) = 0.5 * (z.tail(n).squaredNorm() - 1.0);
      J = Eigen::MatrixXd::Zero(p + 2, 2 * n);
      J.block(0, 0, p, n) = my;
      J.block(0, n, p, n) = mx;
      J.block(p, 0, 1, n) = z.head(n).transpose();
      J.block(p + 1, n, 1, n) = z.tail(n).transpose();
    };
    Eigen::VectorXd seed(2 * n);
    seed << x0, y0;
    NewtonOptions no;
    no.tol = 1e-14;
    NewtonResult nr = closest_point(fn, seed, no);
    Eigen::VectorXd x = nr.z.head(n), y = nr.z.tail(n);
    if (!std::isfinite(x.norm()) || x.norm() == 0.0 || y.norm() == 0.0) return std::nullopt;
    x.normalize();
    y.normalize();
    std::vector<double> xs(x.data(), x.data() + n), ys(y.data(), y.data() + n);
    if (!verify_singular_witness(b_, xs, ys, opts_.tol)) return std::nullopt;
    Witness w;
    w.kind = "bilinear-kernel";
    w.points = {xs, ys};
    w.residual = witness_residual(xs, ys);
    return w;
  }

  double witness_residual(std::span<const double> x, std::span<const double> y) const {
    std::vector<Rational> xr, yr;
    for (double v : x) xr.push_back(from_double(v));
    for (double v : y) yr.push_back(from_double(v));
    auto r = apply(b_, xr, yr);
    Rational s = 0, nx = 0, ny = 0;
    for (auto& v : r) s += v * v;
    for (auto& v : xr) nx += v * v;
    for (auto& v : yr) ny += v * v;
    return std::sqrt(to_double_nearest(s / (nx * ny)));
  }

 private:
  const SymBilinearMap& b_;
  NonsingularOptions opts_;
  std::vector<Interval> enc_;
  std::vector<double> dc_;
};

}  // namespace

bool verify_singular_witness(const SymBilinearMap& b, std::span<const double> x, std::span<const double> y, double tol) {
  std::vector<Rational> xr, yr;
  for (double v : x) xr.push_back(from_double(v));
  for (double v : y) yr.push_back(from_double(v));
  Rational nx = 0, ny = 0, s = 0;
  for (auto& v : xr) nx += v * v;
  for (auto& v : yr) ny += v * v;
  if (nx == 0 || ny == 0) return false;
  for (auto& v : apply(b, xr, yr)) s += v * v;
  Rational t = from_double(tol);
  return s < t * t * nx * ny;
}

Certificate certify_nonsingular(const SymBilinearMap& b, const Budget& budget, const NonsingularOptions& opts) {
  b.validate();
  Certificate cert;
  if (b.n == 0) {
    cert.verdict = Verdict::certified;
    cert.bound = std::numeric_limits<double>::infinity();
    return cert;
  }
  NonsingularSearch search(b, opts);
  std::vector<FaceRegion> roots;
  for (std::size_t f = 0; f < b.n; ++f) {
    Box box = Box::cube(b.n, -1.0, 1.0);
    box.sides[f] = Interval(1.0);
    roots.push_back(FaceRegion{f, std::move(box)});
  }
  auto res = branch_and_bound<FaceRegion, Witness>(search, std::move(roots), budget, opts.rel_gap);
  cert.stats = res.stats;
  cert.upper = res.upper;
  if (res.refuted) {
    cert.verdict = Verdict::refuted;
    cert.bound = 0.0;
    cert.witness = res.witnesses.front();
  } else if (res.bound > 0.0) {
    cert.verdict = Verdict::certified;
    cert.bound = res.bound;
  } else {
    cert.verdict = Verdict::inconclusive;
    cert.bound = std::max(0.0, res.bound);
  }
  return cert;
}

Rational hyperdet(const SymBilinearMap& b) {
  if (b.n != 2 || b.p != 2) throw std::invalid_argument("hyperdet: requires n = p = 2");
  Rational fxx = 2 * b.at(0, 0, 0), fxy = 2 * b.at(0, 0, 1), fyy = 2 * b.at(0, 1, 1);
  Rational gxx = 2 * b.at(1, 0, 0), gxy = 2 * b.at(1, 0, 1), gyy = 2 * b.at(1, 1, 1);
  Rational a = fxx * gyy - fyy * gxx;
  return a * a - 4 * (fxx * gxy - fxy * gxx) * (fxy * gyy - fyy * gxy);
}

int codim_sigma(int n, int p) { return p - 2 * n + 2; }

int corank_codim(int n, int q, int r) {
  if (r < 0 || r > n || n > q) throw std::invalid_argument("corank_codim: requires 0 <= r <= n <= q");
  return (q - n + r) * r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SymBilinearMap random_gaussian(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> g(0.0, 1.0);
  SymBilinearMap b(n, p);
  const double off = std::sqrt(0.5);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) b.set(k, i, j, from_double(i == j ? g(rng) : off * g(rng)));
    }
  }
  return b;
}

StrataSample sample_strata(std::size_t n, std::size_t p, std::size_t trials, std::uint64_t seed, const Budget& budget,
                           const NonsingularOptions& opts) {
  if (trials < 1) throw std::invalid_argument("sample_strata: trials must be positive");
  StrataSample s;
  s.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    SymBilinearMap b = random_gaussian(n, p, seed * 1000003ULL + t);
    Certificate c = certify_nonsingular(b, budget, opts);
    switch (c.verdict) {
      case Verdict::refuted:
        ++s.refuted;
        if (verify_singular_witness(b, c.witness->points[0], c.witness->points[1], opts.tol)) ++s.witnesses_verified;
        break;
      case Verdict::certified: ++s.certified; break;
      case Verdict::inconclusive: ++s.inconclusive; break;
    }
    s.certificates.push_back(std::move(c));
  }
  return s;
}

std::vector<Rational> symmetric_segre(std::span<const Rational> x, std::span<const Rational> y) {
  if (x.size() != y.size()) throw std::invalid_argument("symmetric_segre: length mismatch");
  bool xz = true, yz = true;
  for (auto& v : x) xz = xz && v == 0;
  for (auto& v : y) yz = yz && v == 0;
  if (xz || yz) throw std::invalid_argument("symmetric_segre: zero input");
  std::vector<Rational> s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i; j < x.size(); ++j) s.push_back(i == j ? Rational(Rational(2) * x[i] * y[i]) : Rational(x[i] * y[j] + x[j] * y[i]));
  }
  return s;
}

std::vector<double> symmetric_segre(std::span<const double> x, std::span<const double> y) {
  std::vector<Rational> xr, yr;
  for (double v : x) xr.push_back(from_double(v));
  for (double v : y) yr.push_back(from_double(v));
  std::vector<double> out;
  for (const auto& v : symmetric_segre(xr, yr)) out.push_back(to_double_nearest(v));
  return out;
}

std::vector<std::vector<Rational>> segre_form(const SymBilinearMap& b) {
  std::vector<std::vector<Rational>> l(b.p);
  for (std::size_t k = 0; k < b.p; ++k) {
    for (std::size_t i = 0; i < b.n; ++i) {
      for (std::size_t j = i; j < b.n; ++j) l[k].push_back(i == j ? Rational(b.at(k, i, i) / 2) : b.at(k, i, j));
    }
  }
  return l;
}

}  // namespace tnlab
