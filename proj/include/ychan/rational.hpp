#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace ychan {

/// Exact rational used for every DoF quantity.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Canonical text form: "p" for integers, "p/q" (reduced, q > 0) otherwise.
std::string to_string(const Rational& value);

/// Accepts "p" or "p/q" with optional surrounding whitespace; rejects q == 0.
/// Throws Error(Errc::parse) on malformed input.
Rational parse_rational(std::string_view text);

bool is_integer(const Rational& value);

/// Precondition: is_integer(value) and it fits in long long.
long long to_integer(const Rational& value);

double to_double(const Rational& value);

}  // namespace ychan
