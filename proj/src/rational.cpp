#include "ychan/rational.hpp"

#include <cctype>
#include <limits>

#include "ychan/error.hpp"

namespace ychan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw Error(Errc::parse, "malformed rational '" + std::string(whole) + "'");
  BigInt value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(Errc::parse, "malformed rational '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

std::string to_string(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, text));
  const BigInt num = parse_integer(trim(s.substr(0, slash)), text);
  const BigInt den = parse_integer(trim(s.substr(slash + 1)), text);
  if (den == 0) throw Error(Errc::parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

bool is_integer(const Rational& value) { return denominator(value) == 1; }

long long to_integer(const Rational& value) {
  if (!is_integer(value)) throw Error(Errc::integrality, "value " + to_string(value) + " is not an integer");
  const BigInt num = numerator(value);
  if (num > std::numeric_limits<long long>::max() || num < std::numeric_limits<long long>::min())
    throw Error(Errc::range, "integer " + num.str() + " out of range");
  return num.convert_to<long long>();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace ychan
