#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace reactest {

/// Arbitrary-precision exact rational, always kept in lowest terms.
using Rational = mpq_class;

/// Parses `p/q` or an integer literal. Signs, decimals and exponents are
/// rejected: every scalar in this library is a non-negative exact value.
Rational parse_rational(std::string_view text);

/// Canonical rendering, `p/q` or `p` when the denominator is one.
std::string to_string(const Rational& value);

} // namespace reactest
