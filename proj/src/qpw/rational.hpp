#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace qpw {

using Rational = mpq_class;

// Accepts "p", "-p", "p/q". Throws Error(InvalidArgument) on malformed input
// or a zero denominator.
Rational parse_rational(std::string_view text);

// "p" when integral, "p/q" otherwise.
std::string to_string(const Rational& q);

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

// Narrowing to int64; throws Error(OutOfRange) when not an integer or too big.
std::int64_t to_int64(const Rational& q);

} // namespace qpw
