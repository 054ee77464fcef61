// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/polymap.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tnlab::cli {

/// Exit codes: 0 Certified / true, 1 Refuted / false, 2 Inconclusive,
/// 3 usage error, 4 input, output or verification error.
enum Exit : int { ok = 0, negative = 1, inconclusive = 2, usage = 3, io = 4 };

/// "[a,b]x[c,d]" or "[a,b]^n". Decimal endpoints are rounded outward.
Box parse_box(const std::string& text);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace tnlab::cli
