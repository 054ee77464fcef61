// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/polymap.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tnlab {

/// Registry names; parametrized entries are written with their argument,
/// e.g. "poly-mult-graph(3)".
std::vector<std::string> registry_names();

/// Throws std::invalid_argument for unknown names or bad parameters.
PolyMap get_example(const std::string& name);

struct BoundsRow {
  int n = 0;
  std::optional<int> lower;  // absent beyond the tabulated range
  int upper = 0;
  bool exact = false;        // lower == upper is known
  std::string lower_provenance;
  std::string upper_provenance;
};

BoundsRow tn_bounds(int n);
/// Rows n = 1..17.
std::vector<BoundsRow> tn_table();
std::string tn_table_csv();

std::vector<std::string> identity_names();
/// Exact polynomial identity check. "vandermonde-product" takes an optional
/// size, "vandermonde-product(5)"; the default is 4.
bool polynomial_identity_check(const std::string& name);

/// Exact argument that the quartic graph is totally nonparallel on all of R^2:
/// the determinant factorization plus sum-of-squares forms of both factors.
struct QuarticProof {
  bool factorization = false;
  bool first_factor_sos = false;   // F1 = ((a1+b1)^2 + a1^2 + b1^2 + (a2+b2)^2 + a2^2 + b2^2) / 2
  bool second_factor_sos = false;  // F2 is a sum of squares vanishing only on a = b
  bool hyperdet_zero = false;
  bool holds() const { return factorization && first_factor_sos && second_factor_sos; }
};

QuarticProof quartic_tn_proof();

}  // namespace tnlab
