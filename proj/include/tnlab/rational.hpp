// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>

namespace tnlab {

using Rational = mpq_class;

/// Parses "p", "p/q" or a decimal literal such as "-1.25" or "3e-2" exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Exact value of a finite double.
Rational from_double(double x);

/// Round to the nearest double, ties to even.
double to_double_nearest(const Rational& r);

/// Largest double <= r and smallest double >= r.
std::pair<double, double> enclose(const Rational& r);

}  // namespace tnlab
