// SPDX-License-Identifier: Apache-2.0
#include "tnlab/skew.hpp"

#include "tnlab/rational.hpp"
#include "tnlab/symbil.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tnlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sine_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.cross(b).norm() / (na * nb);
}

std::vector<Eigen::Vector3d> velocities(const TrigLoop& loop, int samples) {
  std::vector<Eigen::Vector3d> v(samples);
  for (int i = 0; i < samples; ++i) v[i] = loop.velocity(kTwoPi * i / samples);
  return v;
}

using IVec3 = std::array<Interval, 3>;

// Enclosure of the velocity over an angle interval.
IVec3 velocity_enclosure(const TrigLoop& loop, const Interval& t) {
  IVec3 r = {Interval(0.0), Interval(0.0), Interval(0.0)};
  for (int k = 1; k <= loop.degree; ++k) {
    Interval kt = Interval(double(k)) * t;
    Interval c = cos(kt), s = sin(kt);
    for (int d = 0; d < 3; ++d) {
      Interval a = loop.coeffs(d, 2 * (k - 1)), b = loop.coeffs(d, 2 * (k - 1) + 1);
      r[d] += Interval(double(k)) * (b * c - a * s);
    }
  }
  return r;
}

IVec3 acceleration_enclosure(const TrigLoop& loop, const Interval& t) {
  IVec3 r = {Interval(0.0), Interval(0.0), Interval(0.0)};
  for (int k = 1; k <= loop.degree; ++k) {
    Interval kt = Interval(double(k)) * t;
    Interval c = cos(kt), s = sin(kt);
    for (int d = 0; d < 3; ++d) {
      Interval a = loop.coeffs(d, 2 * (k - 1)), b = loop.coeffs(d, 2 * (k - 1) + 1);
      r[d] += -Interval(double(k * k)) * (a * c + b * s);
    }
  }
  return r;
}

IVec3 cross(const IVec3& a, const IVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Upper bound of sup |d^order/dt^order of the loop| from the coefficient norms.
double derivative_sup(const TrigLoop& loop, int order) {
  double s = 0.0;
  for (int k = 1; k <= loop.degree; ++k) {
    double a = loop.coeffs.col(2 * (k - 1)).norm(), b = loop.coeffs.col(2 * (k - 1) + 1).norm();
    s = round_up(s + round_up(std::pow(double(k), order) * round_up(a + b)));
  }
  return round_up(s * (1.0 + 1e-12));
}

// Lower bound of |T x T'| over [0, 2pi] by adaptive bisection.
double kappa_lower(const TrigLoop& loop, int max_depth) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<Interval, int>> stack = {{Interval(0.0, round_up(kTwoPi)), 0}};
  while (!stack.empty()) {
    auto [t, depth] = stack.back();
    stack.pop_back();
    IVec3 c = cross(velocity_enclosure(loop, t), acceleration_enclosure(loop, t));
    double lo = norm_lower(c);
    if (lo > 0.0 && (depth >= 6 || lo > 0.5 * best)) {
      best = std::min(best, lo);
      continue;
    }
    if (depth >= max_depth) return 0.0;
    double m = t.mid();
    stack.push_back({Interval(t.lo, m), depth + 1});
    stack.push_back({Interval(m, t.hi), depth + 1});
  }
  return best;
}

struct PairRegionSH {
  Interval s, h;
};

class SkewPairSearch {
 public:
  explicit SkewPairSearch(const TrigLoop& loop) : loop_(loop) {}

  RegionEval evaluate(const PairRegionSH& r) const {
    RegionEval e;
    IVec3 a = velocity_enclosure(loop_, r.s), b = velocity_enclosure(loop_, r.s + r.h);
    e.lower = norm_lower(cross(a, b));
    double s = r.s.mid(), h = r.h.mid();
    e.estimate = loop_.velocity(s).cross(loop_.velocity(s + h)).norm();
    return e;
  }

  std::vector<PairRegionSH> split(const PairRegionSH& r) const {
    if (r.s.width() >= r.h.width()) {
      double m = r.s.mid();
      return {{Interval(r.s.lo, m), r.h}, {Interval(m, r.s.hi), r.h}};
    }
    double m = r.h.mid();
    return {{r.s, Interval(r.h.lo, m)}, {r.s, Interval(m, r.h.hi)}};
  }

  std::optional<Witness> refute(const PairRegionSH&, const RegionEval&) { return std::nullopt; }

 private:
  const TrigLoop& loop_;
};

}  // namespace

TrigLoop TrigLoop::circle(int degree) {
  if (degree < 1) throw std::invalid_argument("TrigLoop: degree must be at least 1");
  TrigLoop l;
  l.degree = degree;
  l.coeffs = Eigen::MatrixXd::Zero(3, 2 * degree);
  l.coeffs(0, 0) = 1.0;
  l.coeffs(1, 1) = 1.0;
  return l;
}

Eigen::Vector3d TrigLoop::velocity(double t) const {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int k = 1; k <= degree; ++k) {
    double c = std::cos(k * t), s = std::sin(k * t);
    v += k * (coeffs.col(2 * (k - 1) + 1) * c - coeffs.col(2 * (k - 1)) * s);
  }
  return v;
}

Eigen::Vector3d TrigLoop::acceleration(double t) const {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int k = 1; k <= degree; ++k) {
    double c = std::cos(k * t), s = std::sin(k * t);
    v -= double(k * k) * (coeffs.col(2 * (k - 1)) * c + coeffs.col(2 * (k - 1) + 1) * s);
  }
  return v;
}

PolyMap TrigLoop::to_polymap() const {
  Polynomial c = Polynomial::variable(2, 0), s = Polynomial::variable(2, 1);
  std::vector<Polynomial> comps(3, Polynomial(2));
  Polynomial ck = c, sk = s;  // cos kt, sin kt
  for (int k = 1; k <= degree; ++k) {
    for (int d = 0; d < 3; ++d) {
      comps[d] += from_double(coeffs(d, 2 * (k - 1))) * ck;
      comps[d] += from_double(coeffs(d, 2 * (k - 1) + 1)) * sk;
    }
    Polynomial cn = c * ck - s * sk, sn = s * ck + c * sk;
    ck = std::move(cn);
    sk = std::move(sn);
  }
  return PolyMap(2, std::move(comps), CoeffMode::floating, DomainKind::circle);
}

double skew_margin(const TrigLoop& loop, int samples, double delta) {
  auto v = velocities(loop, samples);
  const double dt = kTwoPi / samples;
  auto pair_sine = [&](double a, double b) { return sine_between(loop.velocity(a), loop.velocity(b)); };
  auto curv_sine = [&](double a) { return sine_between(loop.velocity(a), loop.acceleration(a)); };
  auto circ = [](double d) {
    d = std::fmod(std::fabs(d), kTwoPi);
    return std::min(d, kTwoPi - d);
  };
  // grid minima alone are easy to overfit; polish each local minimum by pattern search
  double m = std::numeric_limits<double>::infinity();
  std::vector<double> cs(samples);
  for (int i = 0; i < samples; ++i) cs[i] = sine_between(v[i], loop.acceleration(dt * i));
  for (int i = 0; i < samples; ++i) {
    double here = cs[i];
    if (here > cs[(i + 1) % samples] || here > cs[(i + samples - 1) % samples]) continue;
    double a = dt * i, h = dt / 2;
    for (int r = 0; r < 30; ++r, h *= 0.5) {
      for (double c : {a - h, a + h}) {
        double f = curv_sine(c);
        if (f < here) here = f, a = c;
      }
    }
    m = std::min(m, here);
  }
  int gap = std::max(1, static_cast<int>(std::ceil(delta / dt)));
  std::vector<double> g(static_cast<std::size_t>(samples) * samples, std::numeric_limits<double>::infinity());
  auto at = [&](int i, int j) -> double& { return g[static_cast<std::size_t>((i + samples) % samples) * samples + (j + samples) % samples]; };
  for (int i = 0; i < samples; ++i) {
    for (int j = i + gap; j <= i + samples - gap; ++j) {
      if (j >= samples) break;
      at(i, j) = at(j, i) = sine_between(v[i], v[j]);
    }
  }
  for (int i = 0; i < samples; ++i) {
    for (int j = i + gap; j < samples && j <= i + samples - gap; ++j) {
      double here = at(i, j);
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (at(i + di, j + dj) < here) {
            local = false;
            break;
          }
        }
      }
      if (!local) continue;
      double a = dt * i, b = dt * j, h = dt / 2;
      for (int r = 0; r < 30; ++r) {
        bool moved = false;
        for (auto [da, db] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}, {h, h}, {-h, -h}, {h, -h}, {-h, h}}) {
          if (circ(b + db - a - da) < delta) continue;
          double f = pair_sine(a + da, b + db);
          if (f < here) {
            here = f, a += da, b += db;
            moved = true;
          }
        }
        if (!moved) h *= 0.5;
      }
      m = std::min(m, here);
    }
  }
  return m;
}

double sampled_pair_margin(const TrigLoop& loop, int samples) {
  auto v = velocities(loop, samples);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    for (int j = i + 1; j < samples; ++j) m = std::min(m, sine_between(v[i], v[j]));
  }
  return m;
}

SkewCertificate certify_skew(const TrigLoop& loop, const Budget& budget) {
  SkewCertificate sc;
  sc.kappa_lower = kappa_lower(loop, 24);
  double m = round_up(derivative_sup(loop, 1) * derivative_sup(loop, 3));
  if (!(sc.kappa_lower > 0.0) || !(m > 0.0)) {
    sc.cert.verdict = Verdict::inconclusive;
    return sc;
  }
  // |T(t) x T(t+h)| >= |h| (|T x T'|(t) - |h| sup|T| sup|T''| / 2)
  sc.delta = std::min(std::numbers::pi, 0.99 * 2.0 * sc.kappa_lower / m);
  SkewPairSearch prob(loop);
  std::vector<PairRegionSH> roots;
  int pieces = 8;
  for (int i = 0; i < pieces; ++i) {
    roots.push_back({Interval(kTwoPi * i / pieces, kTwoPi * (i + 1) / pieces),
                     Interval(round_down(sc.delta), round_up(kTwoPi - sc.delta))});
  }
  // the last piece must reach 2pi; outward rounding already encloses it
  roots.back().s.hi = round_up(kTwoPi);
  auto res = branch_and_bound<PairRegionSH, Witness>(prob, std::move(roots), budget, 0.5);
  sc.cert.stats = res.stats;
  sc.cert.bound = res.bound;
  sc.cert.upper = res.upper;
  sc.cert.verdict = res.complete && res.bound > 0.0 ? Verdict::certified : Verdict::inconclusive;
  return sc;
}

SkewSearch search_skew(int degree, int iters, std::uint64_t seed, const Budget& certify_budget) {
  if (degree < 1) throw std::invalid_argument("search_skew: degree must be at least 1");
  SkewSearch out;
  out.initial = TrigLoop::circle(degree);
  out.best = out.initial;
  out.initial_margin = skew_margin(out.initial);
  out.margin = out.initial_margin;
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  double step = 0.3;
  for (int it = 0; it < iters; ++it) {
    TrigLoop cand = out.best;
    for (int j = 0; j < cand.coeffs.cols(); ++j) {
      double scale = step / (1.0 + j / 2);  // gentler moves on high harmonics
      for (int d = 0; d < 3; ++d) cand.coeffs(d, j) += scale * gauss(rng);
    }
    double n = cand.coeffs.norm();
    if (n > 0.0) cand.coeffs /= n;
    double m = skew_margin(cand);
    if (m > out.margin) {
      out.best = std::move(cand);
      out.margin = m;
      step = std::min(1.0, step * 1.2);
    } else {
      step = std::max(1e-3, step * 0.97);
    }
    out.history.push_back(out.margin);
  }
  out.certification = certify_skew(out.best, certify_budget);
  return out;
}

}  // namespace tnlab
