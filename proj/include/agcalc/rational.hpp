#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace agcalc {

// Exact rationals. mpq_class keeps values canonical (denominator > 0,
// lowest terms, zero as 0/1) as long as every mutation goes through
// canonicalize(), which the helpers below do.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q", "-p/q" with optional surrounding whitespace.
// Throws ParseError on empty input, junk characters or a zero denominator.
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

Integer factorial(unsigned k);

}  // namespace agcalc
