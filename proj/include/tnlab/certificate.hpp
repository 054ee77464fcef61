// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/branch_bound.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tnlab {

enum class Verdict { certified, refuted, inconclusive };

std::string to_string(Verdict v);

/// Counterexample data: points in the domain, directions attached to them and
/// the residual of the defining equations at the (normalized) witness.
struct Witness {
  std::string kind;
  std::vector<std::vector<double>> points;
  std::vector<std::vector<double>> directions;
  double residual = 0.0;
};

struct Certificate {
  Verdict verdict = Verdict::inconclusive;
  double bound = 0.0;  // certified lower bound (Certified) or best bound so far
  double upper = 0.0;  // best sampled value of the certified quantity
  std::optional<Witness> witness;
  std::vector<Witness> extra_witnesses;
  SearchStats stats;
};

}  // namespace tnlab
