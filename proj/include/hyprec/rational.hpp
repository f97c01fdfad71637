#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hyprec {

/// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
/// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

/// Exact conversion of a binary64 value (every finite double is a dyadic rational).
Rational rational_from_double(double x);

/// Parses "p/q", an integer, or a plain decimal such as "-0.125" without loss.
/// Throws InvalidArgumentError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace hyprec
