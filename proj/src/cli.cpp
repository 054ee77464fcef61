// SPDX-License-Identifier: Apache-2.0
#include "tnlab/cli.hpp"

#include "tnlab/catalog.hpp"
#include "tnlab/certifier.hpp"
#include "tnlab/json_io.hpp"
#include "tnlab/rational.hpp"
#include "tnlab/semifree.hpp"
#include "tnlab/skew.hpp"
#include "tnlab/symbil.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace tnlab::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string example, map_path, bilinear_path, box_text, format = "json", out_path = "-", verify_path;
  std::size_t max_regions = Budget{}.max_regions;
  int max_depth = Budget{}.max_depth;
  double wall_seconds = Budget{}.wall_seconds;
  unsigned workers = 0;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  // command specific
  std::string point, x0, y0, identity;
  int steps = 200;
  double step = 0.02;
  std::size_t k = 2, samples = 10000, n = 2, p = 2, trials = 100;
  int degree = 4, iters = 10000, table_n = 0;
  bool collect_all = false, all_certificates = false;
};

Budget budget_of(const RunConfig& c) {
  if (c.max_regions == 0 || c.max_depth <= 0 || !(c.wall_seconds > 0.0)) throw UsageError("budgets must be positive");
  return Budget{c.max_regions, c.max_depth, c.wall_seconds, c.workers};
}

double tol_of(const RunConfig& c, double dflt) {
  double t = c.tol.value_or(dflt);
  if (!(t > 0.0 && t <= 1e-3)) throw UsageError("--tol must lie in (0, 1e-3]");
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError("malformed JSON in " + what + ": " + e.what());
  }
}

struct LoadedMap {
  PolyMap f;
  json source;
};

LoadedMap load_map(const RunConfig& c) {
  if (!c.example.empty() && !c.map_path.empty()) throw UsageError("give either --example or --map");
  LoadedMap m;
  if (!c.example.empty()) {
    m.f = get_example(c.example);
    m.source = c.example;
  } else if (!c.map_path.empty()) {
    try {
      m.f = polymap_from_json(parse_json_text(read_file(c.map_path), c.map_path));
    } catch (const std::invalid_argument& e) {
      throw IoError(e.what());
    }
    m.source = c.map_path;
  } else {
    throw UsageError("a map is required: --example NAME or --map FILE");
  }
  return m;
}

Box box_for(const RunConfig& c, const PolyMap& f) {
  std::size_t dim = f.domain == DomainKind::circle ? 1 : f.n;
  if (c.box_text.empty()) {
    if (f.domain == DomainKind::circle) return Box({Interval(0.0, round_up(2.0 * std::numbers::pi))});
    return Box::cube(f.n, -1.0, 1.0);
  }
  Box b = parse_box(c.box_text);
  if (b.dim() != dim) {
    throw UsageError("box has dimension " + std::to_string(b.dim()) + " but the domain has dimension " + std::to_string(dim));
  }
  return b;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(to_double_nearest(parse_rational(tok)));
    } catch (const std::exception&) {
      throw UsageError("bad coordinate '" + tok + "'");
    }
  }
  return v;
}

json document(const std::string& command, json input, json options, json result, double wall) {
  json d;
  d["tool"] = "tnlab";
  d["command"] = command;
  d["input"] = std::move(input);
  d["options"] = std::move(options);
  d["result"] = std::move(result);
  d["timing"] = timing_json(wall);
  return d;
}

json budget_json(const Budget& b) {
  json j;
  j["max_regions"] = b.max_regions;
  j["max_depth"] = b.max_depth;
  j["wall_seconds"] = b.wall_seconds;
  return j;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out_path == "-") {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) throw IoError("cannot write " + c.out_path);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_json(const RunConfig& c, const json& doc, std::ostream& out) {
  if (c.format != "json") throw UsageError("this command writes JSON only");
  emit(c, doc.dump(2), out);
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return ok;
    case Verdict::refuted:
      return negative;
    default:
      return inconclusive;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using clock = std::chrono::steady_clock;

int cmd_certify_tn(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  LoadedMap m = load_map(c);
  if (m.f.domain == DomainKind::circle) throw UsageError("certify-tn takes box-domain maps; loops are handled by search-skew");
  Box box = box_for(c, m.f);
  if (m.f.q < 2 * m.f.n) throw UsageError("certify-tn needs q >= 2n");
  TNOptions o;
  o.tol = tol_of(c, o.tol);
  Budget b = budget_of(c);
  TNCertificate cert = certify_tn(m.f, box, b, o);
  json in;
  in["source"] = m.source;
  in["map"] = to_json(m.f);
  in["box"] = to_json(box);
  json opt;
  opt["tol"] = o.tol;
  opt["budget"] = budget_json(b);
  emit_json(c, document("certify-tn", in, opt, to_json(cert), seconds_since(t0)), out);
  return verdict_exit(cert.cert.verdict);
}

SymBilinearMap load_bilinear(const RunConfig& c, json& source) {
  if (!c.bilinear_path.empty()) {
    source = c.bilinear_path;
    try {
      return symbil_from_json(parse_json_text(read_file(c.bilinear_path), c.bilinear_path));
    } catch (const std::invalid_argument& e) {
      throw IoError(e.what());
    }
  }
  LoadedMap m = load_map(c);
  source = m.source;
  if (!m.f.is_graph()) throw UsageError("the map is not a graph x -> (x, Q(x)); pass --bilinear");
  PolyMap q = m.f.graph_tail();
  for (const auto& p : q.components) {
    if (!p.is_zero() && !p.is_homogeneous(2)) throw UsageError("the graph tail is not a homogeneous quadratic");
  }
  return from_quadratic(q);
}

int cmd_certify_nonsingular(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  json source;
  SymBilinearMap bm = load_bilinear(c, source);
  NonsingularOptions o;
  o.tol = tol_of(c, o.tol);
  Budget b = budget_of(c);
  Certificate cert = certify_nonsingular(bm, b, o);
  json in;
  in["source"] = source;
  in["bilinear"] = to_json(bm);
  json opt;
  opt["tol"] = o.tol;
  opt["budget"] = budget_json(b);
  emit_json(c, document("certify-nonsingular", in, opt, to_json(cert), seconds_since(t0)), out);
  return verdict_exit(cert.verdict);
}

int cmd_certify_semifree(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  LoadedMap m = load_map(c);
  if (m.f.domain == DomainKind::circle) throw UsageError("certify-semifree takes box-domain maps");
  Box box = box_for(c, m.f);
  SemifreeOptions o;
  o.tol = tol_of(c, o.tol);
  o.collect_all = c.collect_all;
  Budget b = budget_of(c);
  SemifreeCertificate cert = certify_semifree(m.f, box, b, o);
  json in;
  in["source"] = m.source;
  in["map"] = to_json(m.f);
  in["box"] = to_json(box);
  json opt;
  opt["tol"] = o.tol;
  opt["collect_all"] = o.collect_all;
  opt["exclusion_radius"] = o.exclusion_radius;
  opt["budget"] = budget_json(b);
  emit_json(c, document("certify-semifree", in, opt, to_json(cert), seconds_since(t0)), out);
  return verdict_exit(cert.cert.verdict);
}

int cmd_cubic_check(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  LoadedMap m = load_map(c);
  CubicOptions o;
  o.tol = tol_of(c, o.tol);
  std::vector<double> x0;
  json in;
  in["source"] = m.source;
  in["map"] = to_json(m.f);
  if (!c.point.empty()) {
    x0 = parse_point(c.point);
    if (x0.size() != m.f.n) throw UsageError("--point has the wrong dimension");
  } else {
    Box box = box_for(c, m.f);
    in["box"] = to_json(box);
    SemifreeCertificate sc = certify_semifree(m.f, box, budget_of(c));
    if (sc.cert.verdict != Verdict::refuted || !sc.cert.witness) {
      json r;
      r["verdict"] = "no-verdict";
      r["reason"] = "no non-semifree point found in the box";
      emit_json(c, document("cubic-check", in, json{{"tol", o.tol}}, r, seconds_since(t0)), out);
      return inconclusive;
    }
    x0 = sc.cert.witness->points.front();
  }
  CubicReport rep = cubic_singularity_check(m.f, x0, o);
  json opt;
  opt["tol"] = o.tol;
  emit_json(c, document("cubic-check", in, opt, to_json(rep), seconds_since(t0)), out);
  return rep.verdict == "cubic" ? ok : rep.verdict == "non-cubic" ? negative : inconclusive;
}

int cmd_trace_sigma(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  LoadedMap m = load_map(c);
  if (c.x0.empty() || c.y0.empty()) throw UsageError("trace-sigma needs --x0 and --y0");
  std::vector<double> x0 = parse_point(c.x0), y0 = parse_point(c.y0);
  if (x0.size() != m.f.n || y0.size() != m.f.n) throw UsageError("seed points have the wrong dimension");
  TraceOptions o;
  if (!c.box_text.empty()) o.box = box_for(c, m.f);
  TraceResult r = trace_sigma(m.f, x0, y0, c.steps, c.step, o);
  if (c.format == "svg") {
    emit(c, trace_svg({r}), out);
  } else {
    json in;
    in["source"] = m.source;
    in["map"] = to_json(m.f);
    in["x0"] = x0;
    in["y0"] = y0;
    json opt;
    opt["steps"] = c.steps;
    opt["step"] = c.step;
    emit_json(c, document("trace-sigma", in, opt, to_json(r), seconds_since(t0)), out);
  }
  return r.status == "ok" ? ok : r.status == "empty" ? negative : inconclusive;
}

int cmd_kfold_scan(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  LoadedMap m = load_map(c);
  Box box = box_for(c, m.f);
  if (c.k < 1) throw UsageError("--k must be at least 1");
  if (m.f.q < c.k * m.f.n) throw UsageError("kfold-scan needs q >= k n");
  double tol = tol_of(c, 1e-9);
  KFoldReport r = scan_kfold(m.f, box, c.k, c.samples, c.seed, tol);
  json in;
  in["source"] = m.source;
  in["map"] = to_json(m.f);
  in["box"] = to_json(box);
  json opt;
  opt["k"] = c.k;
  opt["samples"] = c.samples;
  opt["seed"] = c.seed;
  opt["tol"] = tol;
  emit_json(c, document("kfold-scan", in, opt, to_json(r), seconds_since(t0)), out);
  return r.below_tol == 0 ? ok : negative;
}

int cmd_hyperdet(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  json source;
  SymBilinearMap bm = load_bilinear(c, source);
  if (bm.n != 2 || bm.p != 2) throw UsageError("hyperdet needs n = p = 2");
  Rational h = hyperdet(bm);
  json in;
  in["source"] = source;
  in["bilinear"] = to_json(bm);
  json r;
  r["hyperdet"] = to_string(h);
  r["sign"] = sgn(h);
  r["nonsingular_by_sign"] = sgn(h) < 0;
  emit_json(c, document("hyperdet", in, json::object(), r, seconds_since(t0)), out);
  return sgn(h) < 0 ? ok : sgn(h) > 0 ? negative : inconclusive;
}

int cmd_identity_check(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  std::vector<std::string> names;
  if (c.identity.empty()) {
    names = {"quartic-det-factorization", "quartic-hyperdet-zero"};
    for (int k = 1; k <= 5; ++k) names.push_back("vandermonde-product(" + std::to_string(k) + ")");
  } else {
    names = {c.identity};
  }
  json r = json::array();
  bool all = true;
  for (const auto& nm : names) {
    bool h = polynomial_identity_check(nm);
    all = all && h;
    r.push_back(json{{"name", nm}, {"holds", h}});
  }
  json res;
  res["identities"] = std::move(r);
  res["all_hold"] = all;
  if (c.identity.empty() || c.identity == "quartic-det-factorization") {
    QuarticProof qp = quartic_tn_proof();
    res["quartic_tn_proof"] = json{{"factorization", qp.factorization},
                                   {"first_factor_sos", qp.first_factor_sos},
                                   {"second_factor_sos", qp.second_factor_sos},
                                   {"holds", qp.holds()}};
  }
  emit_json(c, document("identity-check", json::object(), json::object(), res, seconds_since(t0)), out);
  return all ? ok : negative;
}

int cmd_strata_sample(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  NonsingularOptions o;
  o.tol = tol_of(c, o.tol);
  Budget b = budget_of(c);
  // the strata sampler has its own smaller per-trial default budget
  Budget per{20000, 40, 60.0, c.workers};
  if (c.max_regions != Budget{}.max_regions) per.max_regions = b.max_regions;
  if (c.max_depth != Budget{}.max_depth) per.max_depth = b.max_depth;
  if (c.wall_seconds != Budget{}.wall_seconds) per.wall_seconds = b.wall_seconds;
  StrataSample s = sample_strata(c.n, c.p, c.trials, c.seed, per, o);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "n,p,trials,refuted,certified,inconclusive,witnesses_verified\n"
       << c.n << ',' << c.p << ',' << s.trials << ',' << s.refuted << ',' << s.certified << ',' << s.inconclusive << ','
       << s.witnesses_verified << '\n';
    emit(c, os.str(), out);
  } else {
    json in;
    in["n"] = c.n;
    in["p"] = c.p;
    in["codim_sigma"] = codim_sigma(static_cast<int>(c.n), static_cast<int>(c.p));
    json opt;
    opt["trials"] = c.trials;
    opt["seed"] = c.seed;
    opt["tol"] = o.tol;
    opt["budget"] = budget_json(per);
    emit_json(c, document("strata-sample", in, opt, to_json(s, c.all_certificates), seconds_since(t0)), out);
  }
  return ok;
}

int cmd_table(const RunConfig& c, std::ostream& out) {
  std::vector<BoundsRow> rows;
  if (c.table_n > 0) {
    rows.push_back(tn_bounds(c.table_n));
  } else {
    rows = tn_table();
  }
  if (c.format == "csv") {
    if (c.table_n > 0) {
      std::ostringstream os;
      const auto& r = rows.front();
      os << "n,lower,upper,exact,lower_provenance,upper_provenance\n"
         << r.n << ',' << (r.lower ? std::to_string(*r.lower) : "") << ',' << r.upper << ',' << (r.exact ? 1 : 0) << ','
         << r.lower_provenance << ',' << r.upper_provenance << '\n';
      emit(c, os.str(), out);
    } else {
      emit(c, tn_table_csv(), out);
    }
  } else if (c.format == "json") {
    json a = json::array();
    for (const auto& r : rows) a.push_back(to_json(r));
    json in = json::object();
    if (c.table_n > 0) in["n"] = c.table_n;
    json r;
    r["rows"] = a;
    emit_json(c, document("table", in, json::object(), r, 0.0), out);
  } else {
    throw UsageError("table writes csv or json");
  }
  return ok;
}

int cmd_search_skew(const RunConfig& c, std::ostream& out) {
  auto t0 = clock::now();
  if (c.degree < 2) throw UsageError("--degree must be at least 2");
  if (c.iters < 0) throw UsageError("--iters must be non-negative");
  SkewSearch s = search_skew(c.degree, c.iters, c.seed, budget_of(c));
  json opt;
  opt["degree"] = c.degree;
  opt["iters"] = c.iters;
  opt["seed"] = c.seed;
  emit_json(c, document("search-skew", json::object(), opt, to_json(s), seconds_since(t0)), out);
  if (s.certification.cert.verdict == Verdict::certified) return ok;
  return s.margin > 0.0 ? inconclusive : negative;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  json doc = parse_json_text(read_file(c.verify_path), c.verify_path);
  VerifyOutcome v = verify_certificate(doc);
  json r;
  r["verdict"] = to_string(v.verdict);
  r["consistent"] = v.consistent;
  r["message"] = v.message;
  emit(c, r.dump(2), out);
  if (!v.consistent) {
    err << "verification failed: " << v.message << '\n';
    return io;
  }
  return verdict_exit(v.verdict);
}

void add_map_opts(CLI::App* a, RunConfig& c) {
  a->add_option("--example", c.example, "registry name");
  a->add_option("--map", c.map_path, "PolyMap JSON file");
}

void add_budget_opts(CLI::App* a, RunConfig& c) {
  a->add_option("--box", c.box_text, "\"[a,b]x[c,d]\" or \"[a,b]^n\"");
  a->add_option("--max-regions", c.max_regions);
  a->add_option("--max-depth", c.max_depth);
  a->add_option("--wall-seconds", c.wall_seconds);
}

}  // namespace

Box parse_box(const std::string& text) {
  static const std::regex side(R"(\s*\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\s*)");
  static const std::regex power(R"(\s*\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\s*\^\s*(\d+)\s*)");
  auto make = [&](const std::string& a, const std::string& b) {
    Rational lo, hi;
    try {
      lo = parse_rational(a);
      hi = parse_rational(b);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad box endpoint in " + text);
    }
    if (lo > hi) throw std::invalid_argument("box side with lower end above upper end: " + text);
    return Interval(enclose(lo).first, enclose(hi).second);
  };
  std::smatch m;
  if (std::regex_match(text, m, power)) {
    int n = std::stoi(m[3]);
    if (n < 1) throw std::invalid_argument("box exponent must be positive");
    return Box(std::vector<Interval>(static_cast<std::size_t>(n), make(m[1], m[2])));
  }
  std::vector<Interval> sides;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t x = text.find(']', pos);
    if (x == std::string::npos) break;
    std::string piece = text.substr(pos, x + 1 - pos);
    if (!std::regex_match(piece, m, side)) throw std::invalid_argument("malformed box: " + text);
    sides.push_back(make(m[1], m[2]));
    pos = x + 1;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == text.size()) break;
    if (text[pos] != 'x') throw std::invalid_argument("malformed box: " + text);
    ++pos;
  }
  if (sides.empty() || pos != text.size()) throw std::invalid_argument("malformed box: " + text);
  return Box(std::move(sides));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app("tnlab: certify totally nonparallel immersions, semifree maps and nonsingular bilinear maps", "tnlab");
  app.require_subcommand(0, 1);
  app.add_option("--verify", c.verify_path, "re-check a certificate JSON (witness re-evaluation, no search)");
  app.add_option("--workers", c.workers, "worker threads (TNLAB_WORKERS overrides)");
  app.add_option("--out", c.out_path, "output path, - for standard output");
  app.add_option("--format", c.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--tol", c.tol);
  app.add_option("--seed", c.seed);

  auto* tn = app.add_subcommand("certify-tn", "certify that a map is totally nonparallel on a box");
  add_map_opts(tn, c);
  add_budget_opts(tn, c);
  auto* ns = app.add_subcommand("certify-nonsingular", "certify a symmetric bilinear map nonsingular");
  add_map_opts(ns, c);
  ns->add_option("--bilinear", c.bilinear_path, "SymBilinearMap JSON file");
  add_budget_opts(ns, c);
  auto* sf = app.add_subcommand("certify-semifree", "certify the second fundamental form nonsingular on a box");
  add_map_opts(sf, c);
  add_budget_opts(sf, c);
  sf->add_flag("--collect-all", c.collect_all, "locate every failure point");
  auto* cu = app.add_subcommand("cubic-check", "classify a non-semifree point");
  add_map_opts(cu, c);
  add_budget_opts(cu, c);
  cu->add_option("--point", c.point, "comma separated coordinates; default: first failure in the box");
  auto* tr = app.add_subcommand("trace-sigma", "trace the double-parallel locus from a seed pair");
  add_map_opts(tr, c);
  tr->add_option("--box", c.box_text);
  tr->add_option("--x0", c.x0)->required();
  tr->add_option("--y0", c.y0)->required();
  tr->add_option("--steps", c.steps);
  tr->add_option("--step", c.step);
  auto* kf = app.add_subcommand("kfold-scan", "sample k-fold margins");
  add_map_opts(kf, c);
  kf->add_option("--box", c.box_text);
  kf->add_option("--k", c.k);
  kf->add_option("--samples", c.samples);
  auto* hd = app.add_subcommand("hyperdet", "hyperdeterminant of a 2 x 2 x 2 quadratic");
  add_map_opts(hd, c);
  hd->add_option("--bilinear", c.bilinear_path);
  auto* id = app.add_subcommand("identity-check", "exact polynomial identities");
  id->add_option("--name", c.identity);
  auto* st = app.add_subcommand("strata-sample", "Monte-Carlo nonsingularity statistics");
  st->add_option("--n", c.n);
  st->add_option("--p", c.p);
  st->add_option("--trials", c.trials);
  st->add_option("--max-regions", c.max_regions);
  st->add_option("--max-depth", c.max_depth);
  st->add_option("--wall-seconds", c.wall_seconds);
  st->add_flag("--certificates", c.all_certificates, "include every certificate");
  auto* tb = app.add_subcommand("table", "bounds on the smallest totally nonparallel dimension");
  tb->add_option("--n", c.table_n, "single row");
  auto* sk = app.add_subcommand("search-skew", "search for a trigonometric skew loop");
  sk->add_option("--degree", c.degree);
  sk->add_option("--iters", c.iters);
  sk->add_option("--max-regions", c.max_regions);
  sk->add_option("--wall-seconds", c.wall_seconds);
  // options may follow the subcommand name
  for (auto* s : {tn, ns, sf, cu, tr, kf, hd, id, st, tb, sk}) s->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }
  try {
    if (!c.verify_path.empty()) return cmd_verify(c, out, err);
    if (tn->parsed()) return cmd_certify_tn(c, out);
    if (ns->parsed()) return cmd_certify_nonsingular(c, out);
    if (sf->parsed()) return cmd_certify_semifree(c, out);
    if (cu->parsed()) return cmd_cubic_check(c, out);
    if (tr->parsed()) return cmd_trace_sigma(c, out);
    if (kf->parsed()) return cmd_kfold_scan(c, out);
    if (hd->parsed()) return cmd_hyperdet(c, out);
    if (id->parsed()) return cmd_identity_check(c, out);
    if (st->parsed()) return cmd_strata_sample(c, out);
    if (tb->parsed()) return cmd_table(c, out);
    if (sk->parsed()) return cmd_search_skew(c, out);
    err << app.help();
    return usage;
  } catch (const UsageError& e) {
    err << "tnlab: " << e.what() << '\n';
    return usage;
  } catch (const IoError& e) {
    err << "tnlab: " << e.what() << '\n';
    return io;
  } catch (const std::invalid_argument& e) {
    // unknown registry names, malformed boxes and parameters
    err << "tnlab: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "tnlab: " << e.what() << '\n';
    return io;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace tnlab::cli
