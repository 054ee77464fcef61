// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/catalog.hpp"
#include "tnlab/certificate.hpp"
#include "tnlab/certifier.hpp"
#include "tnlab/polymap.hpp"
#include "tnlab/semifree.hpp"
#include "tnlab/skew.hpp"
#include "tnlab/symbil.hpp"

#include <json.hpp>

#include <string>

namespace tnlab {

using json = nlohmann::ordered_json;

/// Finite doubles as numbers, infinities and NaN as null.
json num(double v);
double num_from(const json& j);

json to_json(const PolyMap& f);
/// Throws std::invalid_argument on a malformed document.
PolyMap polymap_from_json(const json& j);

json to_json(const SymBilinearMap& b);
SymBilinearMap symbil_from_json(const json& j);

json to_json(const Box& b);
Box box_from_json(const json& j);

json to_json(const Witness& w);
Witness witness_from_json(const json& j);

/// Deterministic search statistics; the wall clock goes to timing_json.
json to_json(const SearchStats& s);
json timing_json(double wall_seconds);

json to_json(const Certificate& c);
json to_json(const DiagonalRadius& d);
json to_json(const TNCertificate& c);
json to_json(const SemifreeCertificate& c);
json to_json(const CubicReport& r);
json to_json(const TraceResult& r);
json to_json(const StrataSample& s, bool with_certificates = false);
json to_json(const KFoldReport& r);
json to_json(const BoundsRow& r);
json to_json(const TrigLoop& l);
TrigLoop trigloop_from_json(const json& j);
json to_json(const SkewSearch& s);

struct VerifyOutcome {
  Verdict verdict = Verdict::inconclusive;
  bool consistent = false;  // the document is well formed and its claim re-checks
  std::string message;
};

/// Re-checks a certificate document without searching: witnesses are
/// re-evaluated against the embedded map, certified claims are checked for
/// internal consistency.
VerifyOutcome verify_certificate(const json& doc);

}  // namespace tnlab
