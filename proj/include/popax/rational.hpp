#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "popax/errors.hpp"

namespace popax {

// Exact rational arithmetic backs welfare levels and head-counts.  Welfare
// levels need exact equality (rank runs, lexicographic ties, shared-part
// cancellation) and head-counts grow past 2^63 in astronomical-background
// scenarios, so a fixed-width representation is not an option.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// floor(n/d) for d > 0.  cpp_int division truncates toward zero.
inline BigInt floor_quot(const BigInt& n, const BigInt& d) {
  BigInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline BigInt rational_floor(const Rational& q) {
  return floor_quot(numerator(q), denominator(q));
}

inline BigInt rational_ceil(const Rational& q) {
  return -floor_quot(-numerator(q), denominator(q));
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

// Exact value of a double; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite number where a rational is required");
  return Rational(x);
}

namespace detail {

// "123", "-4", "1.25", "99.9e2" -> exact decimal fraction.
inline Rational parse_decimal(std::string_view s, std::string_view whole) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = (s[pos++] == '-');
  BigInt mantissa = 0;
  long frac_digits = 0;
  bool any_digit = false, seen_point = false;
  for (; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (ch == '.') {
      if (seen_point) throw ValidationError("bad number '" + std::string(whole) + "'");
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      if (seen_point) ++frac_digits;
      any_digit = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw ValidationError("bad number '" + std::string(whole) + "'");
  long exp10 = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) eneg = (s[pos++] == '-');
    if (pos == s.size()) throw ValidationError("bad exponent in '" + std::string(whole) + "'");
    long e = 0;
    for (; pos < s.size(); ++pos) {
      if (s[pos] < '0' || s[pos] > '9') throw ValidationError("bad exponent in '" + std::string(whole) + "'");
      e = e * 10 + (s[pos] - '0');
      if (e > 100000) throw ValidationError("exponent out of range in '" + std::string(whole) + "'");
    }
    exp10 = eneg ? -e : e;
  }
  if (pos != s.size()) throw ValidationError("bad number '" + std::string(whole) + "'");
  exp10 -= frac_digits;
  BigInt num = mantissa, den = 1;
  BigInt ten(10);
  if (exp10 >= 0) {
    num *= boost::multiprecision::pow(ten, static_cast<unsigned>(exp10));
  } else {
    den = boost::multiprecision::pow(ten, static_cast<unsigned>(-exp10));
  }
  Rational r(num, den);
  return neg ? Rational(-r) : r;
}

}  // namespace detail

// Accepts "3", "-1.25", "6.6e17", and fraction syntax "3/2" (each side a
// decimal).  Decimal strings denote the exact decimal value, not the nearest
// double.
inline Rational parse_rational(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
  if (s.empty()) throw ValidationError("empty string where a number is required");
  std::size_t slash = s.find('/');
  if (slash == std::string_view::npos) return detail::parse_decimal(s, s);
  Rational num = detail::parse_decimal(s.substr(0, slash), s);
  Rational den = detail::parse_decimal(s.substr(slash + 1), s);
  if (den == 0) throw ValidationError("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

// "p" when integral, "p/q" otherwise.
inline std::string format_rational(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (!is_integer(q)) os << '/' << denominator(q);
  return os.str();
}

// True when to_double round-trips exactly, i.e. q is representable.
inline bool fits_double(const Rational& q) {
  double d = to_double(q);
  return std::isfinite(d) && Rational(d) == q;
}

}  // namespace popax
