#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semiflag {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optional sign). Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!valid_int(num)) throw std::invalid_argument("malformed rational: " + std::string(text));
  BigInt p(std::string(num.front() == '+' ? num.substr(1) : num));
  if (slash == std::string_view::npos) return Rational(p);
  const auto den = text.substr(slash + 1);
  if (!valid_int(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("malformed rational: " + std::string(text));
  BigInt q(std::string{den});
  if (q == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  return Rational(p, q);
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline bool is_natural(const Rational& r) { return is_integer(r) && r >= 0; }

/// Natural-number conversion; throws std::range_error if r is not in [0, 2^64).
inline std::uint64_t to_u64(const Rational& r) {
  if (!is_natural(r)) throw std::range_error("not a natural number: " + to_string(r));
  const BigInt& n = numerator(r);
  if (n > BigInt(std::numeric_limits<std::uint64_t>::max()))
    throw std::range_error("natural number exceeds 64 bits: " + n.str());
  return n.convert_to<std::uint64_t>();
}

/// gcd on positive rationals: gcd of numerators over lcm of denominators.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
  BigInt num = boost::multiprecision::gcd(numerator(a), numerator(b));
  BigInt den = boost::multiprecision::lcm(denominator(a), denominator(b));
  return Rational(num, den);
}

}  // namespace semiflag
