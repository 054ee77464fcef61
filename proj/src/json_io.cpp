// SPDX-License-Identifier: Apache-2.0
#include "tnlab/json_io.hpp"

#include "tnlab/jet_engine.hpp"
#include "tnlab/linalg.hpp"
#include "tnlab/rational.hpp"
#include "tnlab/tangency.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

namespace tnlab {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw std::invalid_argument("malformed JSON: " + what); }

Rational coeff_from(const json& c) {
  if (c.is_string()) return parse_rational(c.get<std::string>());
  if (c.is_number_integer()) return Rational(c.get<long>());
  if (c.is_number()) {
    double v = c.get<double>();
    if (!std::isfinite(v)) malformed("non-finite coefficient");
    return from_double(v);
  }
  malformed("coefficient must be a string or a number");
}

json vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json vecs(const std::vector<std::vector<double>>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec(v));
  return a;
}

std::vector<double> vec_from(const json& j) {
  if (!j.is_array()) malformed("expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(num_from(x));
  return v;
}

template <class T>
const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_field(const json& j, const char* key) {
  const json& v = field<void>(j, key);
  if (!v.is_number_integer() || v.get<long>() < 0) malformed(std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) malformed("expected a number");
  return j.get<double>();
}

json to_json(const PolyMap& f) {
  json comps = json::array();
  for (const auto& p : f.components) {
    json terms = json::array();
    for (const auto& [exp, c] : p.terms()) {
      json t;
      t["exp"] = exp;
      if (f.mode == CoeffMode::floating) {
        t["coeff"] = to_double_nearest(c);
      } else {
        t["coeff"] = to_string(c);
      }
      terms.push_back(std::move(t));
    }
    comps.push_back(std::move(terms));
  }
  json j;
  j["n"] = f.n;
  j["q"] = f.q;
  j["mode"] = f.mode == CoeffMode::floating ? "float" : "rational";
  j["domain"] = f.domain == DomainKind::circle ? "circle" : "box";
  j["components"] = std::move(comps);
  return j;
}

PolyMap polymap_from_json(const json& j) {
  if (!j.is_object()) malformed("map must be an object");
  std::size_t n = size_field(j, "n");
  CoeffMode mode = CoeffMode::rational;
  if (j.contains("mode")) {
    std::string m = j.at("mode").is_string() ? j.at("mode").get<std::string>() : "";
    if (m == "float") {
      mode = CoeffMode::floating;
    } else if (m != "rational") {
      malformed("mode must be \"rational\" or \"float\"");
    }
  }
  DomainKind dom = DomainKind::box;
  if (j.contains("domain")) {
    std::string d = j.at("domain").is_string() ? j.at("domain").get<std::string>() : "";
    if (d == "circle") {
      dom = DomainKind::circle;
    } else if (d != "box") {
      malformed("domain must be \"box\" or \"circle\"");
    }
  }
  const json& comps = field<void>(j, "components");
  if (!comps.is_array()) malformed("components must be an array");
  std::vector<Polynomial> ps;
  for (const auto& terms : comps) {
    if (!terms.is_array()) malformed("each component must be an array of terms");
    Polynomial p(n);
    for (const auto& t : terms) {
      const json& e = field<void>(t, "exp");
      if (!e.is_array() || e.size() != n) malformed("exponent vector length must equal n");
      Monomial m;
      for (const auto& x : e) {
        if (!x.is_number_integer() || x.get<long>() < 0) malformed("exponents must be non-negative integers");
        m.push_back(x.get<unsigned>());
      }
      p.add_term(m, coeff_from(field<void>(t, "coeff")));
    }
    ps.push_back(std::move(p));
  }
  if (j.contains("q") && size_field(j, "q") != ps.size()) malformed("q does not match the number of components");
  PolyMap f(n, std::move(ps), mode, dom);
  f.validate();
  return f;
}

json to_json(const SymBilinearMap& b) {
  json c = json::array();
  for (std::size_t k = 0; k < b.p; ++k) {
    json mk = json::array();
    for (std::size_t i = 0; i < b.n; ++i) {
      json row = json::array();
      for (std::size_t jj = 0; jj < b.n; ++jj) row.push_back(to_string(b.at(k, i, jj)));
      mk.push_back(std::move(row));
    }
    c.push_back(std::move(mk));
  }
  json j;
  j["n"] = b.n;
  j["p"] = b.p;
  j["coeffs"] = std::move(c);
  return j;
}

SymBilinearMap symbil_from_json(const json& j) {
  std::size_t n = size_field(j, "n"), p = size_field(j, "p");
  const json& c = field<void>(j, "coeffs");
  if (!c.is_array() || c.size() != p) malformed("coeffs must hold p matrices");
  SymBilinearMap b(n, p);
  for (std::size_t k = 0; k < p; ++k) {
    if (!c[k].is_array() || c[k].size() != n) malformed("each coefficient matrix must be n x n");
    for (std::size_t i = 0; i < n; ++i) {
      if (!c[k][i].is_array() || c[k][i].size() != n) malformed("each coefficient matrix must be n x n");
      for (std::size_t jj = 0; jj < n; ++jj) b.coeffs[(k * n + i) * n + jj] = coeff_from(c[k][i][jj]);
    }
  }
  b.validate();
  return b;
}

json to_json(const Box& b) {
  json a = json::array();
  for (const auto& s : b.sides) a.push_back(json::array({s.lo, s.hi}));
  return a;
}

Box box_from_json(const json& j) {
  if (!j.is_array()) malformed("box must be an array of [lo, hi] pairs");
  std::vector<Interval> sides;
  for (const auto& s : j) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) malformed("box side must be [lo, hi]");
    double lo = s[0].get<double>(), hi = s[1].get<double>();
    if (!(lo <= hi)) malformed("box side with lo > hi");
    sides.emplace_back(lo, hi);
  }
  return Box(std::move(sides));
}

json to_json(const Witness& w) {
  json j;
  j["kind"] = w.kind;
  j["points"] = vecs(w.points);
  j["directions"] = vecs(w.directions);
  j["residual"] = num(w.residual);
  return j;
}

Witness witness_from_json(const json& j) {
  Witness w;
  const json& k = field<void>(j, "kind");
  if (!k.is_string()) malformed("witness kind must be a string");
  w.kind = k.get<std::string>();
  for (const auto& p : field<void>(j, "points")) w.points.push_back(vec_from(p));
  if (j.contains("directions")) {
    for (const auto& d : j.at("directions")) w.directions.push_back(vec_from(d));
  }
  if (j.contains("residual")) w.residual = num_from(j.at("residual"));
  return w;
}

json to_json(const SearchStats& s) {
  json j;
  j["processed"] = s.processed;
  j["discharged"] = s.discharged;
  j["covered"] = s.covered;
  j["open"] = s.open;
  j["max_depth"] = s.max_depth;
  j["refute_attempts"] = s.refute_attempts;
  j["budget_exhausted"] = s.budget_exhausted;
  return j;
}

json timing_json(double wall_seconds) {
  json j;
  j["wall_seconds"] = wall_seconds;
  j["timestamp"] = static_cast<long long>(std::time(nullptr));
  return j;
}

json to_json(const Certificate& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["bound"] = num(c.bound);
  j["upper"] = num(c.upper);
  j["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  if (!c.extra_witnesses.empty()) {
    json a = json::array();
    for (const auto& w : c.extra_witnesses) a.push_back(to_json(w));
    j["extra_witnesses"] = std::move(a);
  }
  j["stats"] = to_json(c.stats);
  return j;
}

json to_json(const DiagonalRadius& d) {
  json j;
  j["status"] = d.status;
  j["rho"] = num(d.rho);
  j["c1"] = num(d.c1);
  j["c2"] = num(d.c2);
  j["C3"] = num(d.C3);
  j["failure"] = d.failure ? to_json(*d.failure) : json(nullptr);
  j["stats"] = to_json(d.stats);
  return j;
}

json to_json(const TNCertificate& c) {
  json j = to_json(c.cert);
  j["rho"] = num(c.rho);
  j["offdiag_bound"] = num(c.offdiag_bound);
  j["diagonal"] = to_json(c.diagonal);
  if (c.worst) {
    json w;
    w["bx"] = to_json(c.worst->bx);
    w["by"] = to_json(c.worst->by);
    w["lower"] = num(c.worst_lower);
    j["worst_region"] = std::move(w);
  } else {
    j["worst_region"] = nullptr;
  }
  return j;
}

json to_json(const SemifreeCertificate& c) {
  json j = to_json(c.cert);
  json f = json::array();
  for (const auto& w : c.failures) f.push_back(to_json(w));
  j["failures"] = std::move(f);
  j["complete"] = c.complete;
  if (c.worst) {
    json w;
    w["x"] = to_json(*c.worst);
    w["lower"] = num(c.worst_lower);
    j["worst_region"] = std::move(w);
  } else {
    j["worst_region"] = nullptr;
  }
  json ic;
  ic["samples"] = c.image_check.samples;
  ic["min_sine"] = num(c.image_check.min_sine);
  ic["forced_by_dimension"] = c.image_check.forced_by_dimension;
  ic["discrepancy"] = c.image_check.discrepancy;
  j["image_check"] = std::move(ic);
  return j;
}

json to_json(const CubicReport& r) {
  json j;
  j["verdict"] = r.verdict;
  j["reason"] = r.reason;
  j["point"] = vec(r.point);
  j["u"] = vec(r.u);
  j["v"] = vec(r.v);
  j["mixed"] = r.mixed;
  j["isolated"] = r.isolated;
  j["isolation_margin"] = num(r.isolation_margin);
  j["restored_semifree"] = r.restored_semifree;
  j["independent"] = r.independent;
  j["independence_margins"] = json::array({num(r.independence_margin_1), num(r.independence_margin_2)});
  return j;
}

json to_json(const TraceResult& r) {
  json j;
  j["status"] = r.status;
  j["locus_dimension"] = r.locus_dimension;
  j["null_dimension"] = r.null_dimension;
  json nodes = json::array();
  for (const auto& nd : r.nodes) {
    json o;
    o["x"] = vec(nd.x);
    o["y"] = vec(nd.y);
    o["u"] = vec(nd.u);
    o["v"] = vec(nd.v);
    o["residual"] = num(nd.residual);
    o["sigma"] = num(nd.sigma);
    nodes.push_back(std::move(o));
  }
  j["nodes"] = std::move(nodes);
  j["projection"] = vecs(r.projection);
  return j;
}

json to_json(const StrataSample& s, bool with_certificates) {
  json j;
  j["trials"] = s.trials;
  j["refuted"] = s.refuted;
  j["certified"] = s.certified;
  j["inconclusive"] = s.inconclusive;
  j["witnesses_verified"] = s.witnesses_verified;
  j["fraction_refuted"] = s.fraction_refuted();
  j["fraction_certified"] = s.fraction_certified();
  j["fraction_inconclusive"] = s.fraction_inconclusive();
  if (with_certificates) {
    json a = json::array();
    for (const auto& c : s.certificates) a.push_back(to_json(c));
    j["certificates"] = std::move(a);
  }
  return j;
}

json to_json(const KFoldReport& r) {
  json j;
  j["samples"] = r.samples;
  j["min_margin"] = num(r.min_margin);
  j["worst_tuple"] = vecs(r.worst_tuple);
  j["below_tol"] = r.below_tol;
  j["first_below"] = vecs(r.first_below);
  return j;
}

json to_json(const BoundsRow& r) {
  json j;
  j["n"] = r.n;
  j["lower"] = r.lower ? json(*r.lower) : json(nullptr);
  j["upper"] = r.upper;
  j["exact"] = r.exact;
  j["lower_provenance"] = r.lower_provenance;
  j["upper_provenance"] = r.upper_provenance;
  return j;
}

json to_json(const TrigLoop& l) {
  json j;
  j["degree"] = l.degree;
  json c = json::array();
  for (int k = 0; k < l.coeffs.cols(); ++k) {
    c.push_back(json::array({l.coeffs(0, k), l.coeffs(1, k), l.coeffs(2, k)}));
  }
  j["coefficients"] = std::move(c);  // A_1, B_1, A_2, B_2, ...
  j["map"] = to_json(l.to_polymap());
  return j;
}

TrigLoop trigloop_from_json(const json& j) {
  TrigLoop l;
  l.degree = j.at("degree").get<int>();
  const json& c = j.at("coefficients");
  if (l.degree < 1 || c.size() != static_cast<std::size_t>(2 * l.degree)) {
    throw std::invalid_argument("trig loop: expected 2 * degree coefficient vectors");
  }
  l.coeffs.resize(3, 2 * l.degree);
  for (int k = 0; k < 2 * l.degree; ++k) {
    const json& v = c.at(static_cast<std::size_t>(k));
    if (v.size() != 3) throw std::invalid_argument("trig loop: coefficient vectors live in R^3");
    for (int d = 0; d < 3; ++d) l.coeffs(d, k) = v.at(static_cast<std::size_t>(d)).get<double>();
  }
  return l;
}

json to_json(const SkewSearch& s) {
  json j;
  j["initial_margin"] = num(s.initial_margin);
  j["margin"] = num(s.margin);
  j["loop"] = to_json(s.best);
  j["history"] = vec(s.history);
  json c = to_json(s.certification.cert);
  c["kappa_lower"] = num(s.certification.kappa_lower);
  c["delta"] = num(s.certification.delta);
  j["certification"] = std::move(c);
  return j;
}

namespace {

VerifyOutcome check_double_parallel(const PolyMap& f, const Witness& w, double tol) {
  VerifyOutcome o;
  if (w.points.size() != 2 || w.directions.size() != 2) {
    o.message = "double-parallel witness needs two points and two directions";
    return o;
  }
  MapJets jets(f);
  const auto &x = w.points[0], &y = w.points[1], &u = w.directions[0], &v = w.directions[1];
  if (x.size() != f.n || y.size() != f.n || u.size() != f.n || v.size() != f.n) {
    o.message = "witness dimension mismatch";
    return o;
  }
  Eigen::VectorXd uu = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(f.n));
  Eigen::VectorXd vv = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(f.n));
  double r = (jets.d1(x) * uu - jets.d1(y) * vv).norm();
  double norm_err = std::fabs(0.5 * (uu.squaredNorm() + vv.squaredNorm() - 2.0));
  double sep = (Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(f.n)) -
                Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(f.n)))
                   .norm();
  o.consistent = r < scaled_parallel_tol(tol, sep, f.degree()) && norm_err < tol && sep > 0.0;
  o.message = "recomputed residual " + std::to_string(r);
  return o;
}

VerifyOutcome check_sff_kernel(const PolyMap& f, const Witness& w, double tol) {
  VerifyOutcome o;
  if (w.points.size() != 1 || w.directions.size() != 2) {
    o.message = "sff-kernel witness needs one point and two directions";
    return o;
  }
  SFFData s = second_fundamental_form(f, w.points[0]);
  auto n = static_cast<Eigen::Index>(f.n);
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(w.directions[0].data(), n).normalized();
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(w.directions[1].data(), n).normalized();
  Eigen::VectorXd val(static_cast<Eigen::Index>(s.projected.size()));
  for (std::size_t k = 0; k < s.projected.size(); ++k) val(static_cast<Eigen::Index>(k)) = a.dot(s.projected[k] * b);
  o.consistent = val.norm() < tol;
  o.message = "recomputed |SFF(a,b)| " + std::to_string(val.norm());
  return o;
}

VerifyOutcome check_non_immersion(const PolyMap& f, const Witness& w) {
  VerifyOutcome o;
  if (w.points.size() != 1) {
    o.message = "non-immersion witness needs one point";
    return o;
  }
  MapJets jets(f);
  Eigen::MatrixXd d = jets.d1(w.points[0]);
  double s = sigma_min(d);
  o.consistent = s <= 1e-12 * std::max(1.0, d.norm());
  o.message = "recomputed sigma_min(df) " + std::to_string(s);
  return o;
}

}  // namespace

VerifyOutcome verify_certificate(const json& doc) {
  VerifyOutcome out;
  try {
    std::string cmd = field<void>(doc, "command").get<std::string>();
    const json& res = field<void>(doc, "result");
    std::string vs = field<void>(res, "verdict").get<std::string>();
    if (vs == "Certified") {
      out.verdict = Verdict::certified;
    } else if (vs == "Refuted") {
      out.verdict = Verdict::refuted;
    } else if (vs == "Inconclusive") {
      out.verdict = Verdict::inconclusive;
    } else {
      malformed("unknown verdict " + vs);
    }
    double tol = num_from(field<void>(field<void>(doc, "options"), "tol"));
    const json& input = field<void>(doc, "input");
    if (out.verdict == Verdict::inconclusive) {
      out.consistent = true;
      out.message = "inconclusive: nothing to re-check";
      return out;
    }
    if (cmd == "certify-nonsingular") {
      SymBilinearMap b = symbil_from_json(field<void>(input, "bilinear"));
      if (out.verdict == Verdict::refuted) {
        Witness w = witness_from_json(field<void>(res, "witness"));
        if (w.points.size() != 2) malformed("bilinear-kernel witness needs two points");
        out.consistent = verify_singular_witness(b, w.points[0], w.points[1], tol);
        out.message = out.consistent ? "witness verified exactly" : "witness fails exact re-check";
      } else {
        double bound = num_from(field<void>(res, "bound"));
        out.consistent = bound > 0.0 && field<void>(res, "stats").at("open").get<std::size_t>() == 0;
        out.message = "certified bound " + std::to_string(bound);
      }
      return out;
    }
    PolyMap f = polymap_from_json(field<void>(input, "map"));
    if (cmd == "certify-tn") {
      if (out.verdict == Verdict::refuted) {
        Witness w = witness_from_json(field<void>(res, "witness"));
        VerifyOutcome o = w.kind == "double-parallel" ? check_double_parallel(f, w, tol)
                          : w.kind == "non-immersion" ? check_non_immersion(f, w)
                                                      : VerifyOutcome{};
        o.verdict = out.verdict;
        return o;
      }
      double bound = num_from(field<void>(res, "offdiag_bound"));
      double rho = num_from(field<void>(res, "rho"));
      out.consistent = bound > 0.0 && rho > 0.0 && field<void>(res, "diagonal").at("status") == "ok";
      out.message = "certified: rho " + std::to_string(rho) + ", off-diagonal bound " + std::to_string(bound);
      return out;
    }
    if (cmd == "certify-semifree") {
      if (out.verdict == Verdict::refuted) {
        Witness w = witness_from_json(field<void>(res, "witness"));
        VerifyOutcome o = w.kind == "sff-kernel"      ? check_sff_kernel(f, w, tol)
                          : w.kind == "non-immersion" ? check_non_immersion(f, w)
                                                      : VerifyOutcome{};
        o.verdict = out.verdict;
        return o;
      }
      double bound = num_from(field<void>(res, "bound"));
      out.consistent = bound > 0.0;
      out.message = "certified bound " + std::to_string(bound);
      return out;
    }
    out.message = "command " + cmd + " has no verifiable certificate";
  } catch (const std::exception& e) {
    out.consistent = false;
    out.message = e.what();
  }
  return out;
}

}  // namespace tnlab
