// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "gen.hpp"

#include "tnlab/catalog.hpp"
#include "tnlab/cli.hpp"
#include "tnlab/json_io.hpp"
#include "tnlab/symbil.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tnlab;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  Run r;
  r.code = cli::run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tnlab_test_" + name)).string();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

json strip_timing(json d) {
  d.erase("timing");
  return d;
}

}  // namespace

TEST_CASE("polymap json round trip") {
  gen::Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    PolyMap f = rng.polymap(3, 4, 3);
    json j = to_json(f);
    PolyMap g = polymap_from_json(j);
    CHECK(g.n == f.n);
    CHECK(g.q == f.q);
    CHECK(g.components == f.components);
    CHECK(to_json(g) == j);
  }
  json j = to_json(get_example("cubic-R3-R10"));
  CHECK(j["mode"] == "rational");
  CHECK(j["components"][4][0]["coeff"].is_string());
}

TEST_CASE("malformed maps are rejected") {
  CHECK_THROWS(polymap_from_json(json::parse(R"({"n": 2, "q": 1, "components": [[{"exp": [1], "coeff": "1"}]]})")));
  CHECK_THROWS(polymap_from_json(json::parse(R"({"n": 1, "q": 2, "components": [[{"exp": [1], "coeff": "1"}]]})")));
  CHECK_THROWS(polymap_from_json(json::parse(R"({"n": 1, "q": 1, "components": [[{"exp": [1], "coeff": "x"}]]})")));
}

TEST_CASE("bilinear, box and witness round trips") {
  SymBilinearMap b = random_gaussian(3, 2, 9);
  SymBilinearMap c = symbil_from_json(to_json(b));
  CHECK(c.coeffs == b.coeffs);
  Box bx({Interval(-1, 0.5), Interval(0.25, 2)});
  Box by = box_from_json(to_json(bx));
  CHECK(by.sides[0].lo == -1);
  CHECK(by.sides[1].hi == 2);
  Witness w{"double-parallel", {{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}, 1e-12};
  Witness v = witness_from_json(to_json(w));
  CHECK(v.kind == w.kind);
  CHECK(v.points == w.points);
  CHECK(v.residual == w.residual);
  CHECK(num(std::numeric_limits<double>::infinity()).is_null());
  CHECK(std::isinf(num_from(json())));
}

TEST_CASE("box syntax") {
  Box a = cli::parse_box("[-1,1]x[0,2]");
  REQUIRE(a.dim() == 2);
  CHECK(a.sides[1].hi == 2.0);
  Box b = cli::parse_box("[-1,1]^4");
  CHECK(b.dim() == 4);
  Box c = cli::parse_box("[0,1/3]");
  CHECK(c.sides[0].hi >= 1.0 / 3.0);
  CHECK_THROWS(cli::parse_box("[1,0]"));
  CHECK_THROWS(cli::parse_box("[0,1]y[0,1]"));
  CHECK_THROWS(cli::parse_box(""));
}

TEST_CASE("exit codes") {
  CHECK(run({"certify-tn", "--example", "complex-squaring", "--box", "[-1,1]x[-1,1]"}).code == 0);
  CHECK(run({"certify-tn", "--example", "quaternion-squaring", "--box", "[-1,1]^4"}).code == 1);
  CHECK(run({"certify-tn", "--example", "quartic-R2-R4", "--max-regions", "200"}).code == 2);
  CHECK(run({"certify-tn", "--example", "no-such-map"}).code == 3);
  CHECK(run({"certify-tn", "--example", "parabola", "--box", "[-1,1]^2"}).code == 3);
  CHECK(run({"certify-tn", "--example", "parabola", "--tol", "0.5"}).code == 3);
  CHECK(run({"certify-tn", "--example", "parabola", "--max-regions", "0"}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({"certify-tn", "--map", "/nonexistent/map.json"}).code == 4);
  std::string bad = temp_path("bad.json");
  write(bad, "{not json");
  CHECK(run({"certify-tn", "--map", bad}).code >= 3);
  std::remove(bad.c_str());
}

TEST_CASE("quaternion witness in the document") {
  Run r = run({"certify-tn", "--example", "quaternion-squaring", "--box", "[-1,1]^4"});
  json d = json::parse(r.out);
  CHECK(d["tool"] == "tnlab");
  CHECK(d["command"] == "certify-tn");
  const json& w = d["result"]["witness"];
  CHECK(w["points"][1][1].get<double>() == doctest::Approx(1.0));
  CHECK(std::fabs(w["directions"][0][2].get<double>()) == doctest::Approx(1.0));
}

TEST_CASE("documents are deterministic apart from timing") {
  for (std::vector<std::string> args : {std::vector<std::string>{"certify-tn", "--example", "poly-mult-graph(3)"},
                                        std::vector<std::string>{"strata-sample", "--n", "2", "--p", "3", "--trials", "50"},
                                        std::vector<std::string>{"certify-semifree", "--example", "cubic-R3-R10"}}) {
    Run a = run(args), b = run(args);
    CHECK(strip_timing(json::parse(a.out)) == strip_timing(json::parse(b.out)));
    auto w1 = args, w8 = args;
    w1.insert(w1.begin(), {"--workers", "1"});
    w8.insert(w8.begin(), {"--workers", "8"});
    CHECK(strip_timing(json::parse(run(w1).out)) == strip_timing(json::parse(run(w8).out)));
  }
}

TEST_CASE("verify reproduces verdicts without searching") {
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  std::vector<Case> cases = {
      {{"certify-tn", "--example", "complex-squaring"}, 0},
      {{"certify-tn", "--example", "quaternion-squaring"}, 1},
      {{"certify-nonsingular", "--example", "complex-squaring"}, 0},
      {{"certify-semifree", "--example", "cubic-R3-R10"}, 1},
      {{"certify-semifree", "--example", "poly-mult-graph(2)"}, 0},
  };
  for (const auto& c : cases) {
    Run r = run(c.args);
    REQUIRE(r.code == c.code);
    std::string path = temp_path("cert.json");
    write(path, r.out);
    Run v = run({"--verify", path});
    CHECK(v.code == c.code);
    CHECK(json::parse(v.out)["consistent"] == true);
    std::remove(path.c_str());
  }
}

TEST_CASE("verify rejects a tampered witness") {
  Run r = run({"certify-tn", "--example", "quaternion-squaring"});
  json d = json::parse(r.out);
  d["result"]["witness"]["directions"][1][2] = -1.0;
  std::string path = temp_path("tampered.json");
  write(path, d.dump());
  Run v = run({"--verify", path});
  CHECK(v.code == 4);
  CHECK(json::parse(v.out)["consistent"] == false);
  std::remove(path.c_str());
}

TEST_CASE("maps load from files") {
  std::string path = temp_path("map.json");
  write(path, to_json(get_example("parabola")).dump());
  CHECK(run({"certify-tn", "--map", path, "--box", "[-1,1]"}).code == 0);
  std::remove(path.c_str());
  std::string bpath = temp_path("bil.json");
  write(bpath, to_json(poly_mult(3)).dump());
  CHECK(run({"certify-nonsingular", "--bilinear", bpath}).code == 0);
  std::remove(bpath.c_str());
}

TEST_CASE("other subcommands") {
  Run t = run({"table", "--format", "csv"});
  CHECK(t.code == 0);
  CHECK(std::count(t.out.begin(), t.out.end(), '\n') == 18);
  Run tj = run({"table"});
  CHECK(json::parse(tj.out)["result"]["rows"].size() == 17);
  CHECK(run({"identity-check"}).code == 0);
  CHECK(run({"hyperdet", "--example", "complex-squaring"}).code == 0);
  Run k = run({"kfold-scan", "--example", "moment-curve(3)", "--k", "3", "--samples", "1000", "--box", "[0,1]"});
  CHECK(k.code == 0);
  Run c = run({"cubic-check", "--example", "cubic-R3-R10", "--point", "0,0,0"});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out)["result"]["verdict"] == "cubic");
  Run s = run({"--format", "svg", "trace-sigma", "--example", "cubic-R3-R10", "--x0", "0,0.3,0", "--y0", "0,-0.3,0",
               "--steps", "20", "--box", "[-1,1]^3"});
  CHECK(s.code == 0);
  CHECK(s.out.find("<svg") != std::string::npos);
  Run csv = run({"--format", "csv", "strata-sample", "--n", "2", "--p", "1", "--trials", "5"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("\n2,1,5,5,0,0,5\n") != std::string::npos);
}

TEST_CASE("output file") {
  std::string path = temp_path("out.json");
  Run r = run({"--out", path, "certify-tn", "--example", "parabola"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(json::parse(ss.str())["result"]["verdict"] == "Certified");
  std::remove(path.c_str());
}
