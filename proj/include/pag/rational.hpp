#pragma once

#include <gmpxx.h>

#include <string>

namespace pag {

// All game quantities are exact rationals. State classification compares
// support and threat for exact equality, so nothing here may ever round.
using Rational = mpq_class;

// Accepts "8", "-3", "3/4", "-3/4", "0.25", "-1.5". No exponents, no
// whitespace, denominator must be a positive integer.
Rational parse_rational(const std::string& text);

// Canonical "num/den" with positive denominator and gcd 1, e.g. "3/1", "-1/2".
std::string fraction_string(const Rational& q);

Rational rational_of(long num, long den = 1);

}  // namespace pag
