#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "zariski/error.hpp"

namespace zariski {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned exponent) {
  BigInt result = 1;
  result <<= exponent;
  return result;
}

inline bool is_integer(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

inline BigInt to_integer(const Rational& value) {
  require(is_integer(value), ErrorCode::internal, "rational value is not an integer");
  return boost::multiprecision::numerator(value);
}

/// Exact "p/q" rendering; integers render without a denominator.
inline std::string rational_string(const Rational& value) {
  const BigInt& num = boost::multiprecision::numerator(value);
  const BigInt& den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Strict base-10 integer parsing (cpp_int's own parser would read "010" as octal).
inline BigInt parse_decimal_integer(const std::string& text) {
  const std::size_t start = !text.empty() && (text[0] == '-' || text[0] == '+') ? 1 : 0;
  require(text.size() > start && text.size() - start <= 4096 &&
              std::all_of(text.begin() + start, text.end(), [](char c) { return c >= '0' && c <= '9'; }),
          ErrorCode::parse, "cannot parse integer '" + text + "'");
  const std::size_t first = std::min(text.find_first_not_of('0', start), text.size() - 1);
  const BigInt magnitude(text.substr(first));
  return text[0] == '-' ? BigInt(-magnitude) : magnitude;
}

/// Parses "p/q", an integer, or a decimal literal such as "0.25" (converted exactly).
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt num = parse_decimal_integer(text.substr(0, slash));
    const BigInt den = parse_decimal_integer(text.substr(slash + 1));
    require(den != 0, ErrorCode::parse, "zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_decimal_integer(text));
  const std::string whole = text.substr(0, dot);
  const std::string fraction = text.substr(dot + 1);
  require(!fraction.empty() && fraction.find_first_of("+-") == std::string::npos, ErrorCode::parse,
          "cannot parse number '" + text + "'");
  const bool negative = !whole.empty() && whole[0] == '-';
  const std::string sign_free = whole.empty() || whole == "-" || whole == "+" ? "0" : whole;
  BigInt den = 1;
  for (std::size_t i = 0; i < fraction.size(); ++i) den *= 10;
  const BigInt int_part = parse_decimal_integer(sign_free);
  const BigInt frac_part = parse_decimal_integer(fraction);
  const BigInt magnitude = (int_part < 0 ? BigInt(-int_part) : int_part) * den + frac_part;
  return Rational(negative ? BigInt(-magnitude) : magnitude, den);
}

inline long double to_long_double(const Rational& value) {
  return boost::multiprecision::numerator(value).convert_to<long double>() /
         boost::multiprecision::denominator(value).convert_to<long double>();
}

/// log2 of a positive big integer, accurate for values far beyond the long double range.
inline long double log2_big(const BigInt& value) {
  require(value > 0, ErrorCode::usage, "log2 of non-positive value");
  std::size_t bits = boost::multiprecision::msb(value);
  if (bits < 60) return std::log2(value.convert_to<long double>());
  unsigned shift = static_cast<unsigned>(bits - 60);
  BigInt top = value >> shift;
  return std::log2(top.convert_to<long double>()) + static_cast<long double>(shift);
}

/// Rounds to the given number of significant decimal digits.
inline double round_significant(long double value, int digits = 12) {
  if (value == 0 || !std::isfinite(value)) return static_cast<double>(value);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*Lg", digits, value);
  return std::strtod(buffer, nullptr);
}

}  // namespace zariski
