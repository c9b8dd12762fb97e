#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gci {

// Arbitrary-precision rational, kept canonical (gcd 1, positive denominator).
using Rat = mpq_class;
using Int = mpz_class;

// Accepts "p", "-p", "p/q". Throws FormatError on anything else or q = 0.
Rat parse_rat(std::string_view text);

std::string to_string(const Rat& r);

inline int sign(const Rat& r) { return sgn(r); }

}  // namespace gci
