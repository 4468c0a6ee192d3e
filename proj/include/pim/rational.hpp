#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pim/errors.hpp"

namespace pim {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
/// Exact fraction, always stored reduced with a positive denominator.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

using RatVector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string to_string(const Integer& i) { return i.str(); }

/// Parses ['-'] digits ('/' digits)?. Rejects a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }
  auto digits = [&](Integer& out) {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) return false;
    out = Integer(std::string(text.substr(start, pos - start)));
    return true;
  };
  Integer num, den = 1;
  if (!digits(num)) return std::nullopt;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    if (!digits(den)) return std::nullopt;
  }
  if (pos != text.size() || den == 0) return std::nullopt;
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

inline Rational pow(const Rational& base, long long exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero raised to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

inline long long to_exponent(const Integer& e) {
  if (e > Integer(std::numeric_limits<int>::max()) ||
      e < Integer(std::numeric_limits<int>::min())) {
    throw DomainError("exponent " + e.str() + " out of range");
  }
  return e.convert_to<long long>();
}

inline Rational pow(const Rational& base, const Integer& exponent) {
  return pow(base, to_exponent(exponent));
}

/// Exact k-th root of a nonnegative integer, if one exists.
inline std::optional<Integer> exact_root(const Integer& value, unsigned k) {
  if (value < 0 || k == 0) return std::nullopt;
  if (value < 2 || k == 1) return value;
  // bisection on [0, 2^(bits/k + 1)]
  std::size_t bits = boost::multiprecision::msb(value) + 1;
  Integer lo = 0;
  Integer hi = Integer(1) << (bits / k + 1);
  while (lo < hi) {
    Integer mid = (lo + hi + 1) / 2;
    Integer p = boost::multiprecision::pow(mid, k);
    if (p <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (boost::multiprecision::pow(lo, k) == value) return lo;
  return std::nullopt;
}

/// base^exponent for a positive base and rational exponent, when the result
/// is itself rational.
inline std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent) {
  if (base <= 0) throw DomainError("exact_pow requires a positive base");
  Integer den = denominator(exponent);
  if (den > 4096) return std::nullopt;
  unsigned k = den.convert_to<unsigned>();
  auto num_root = exact_root(numerator(base), k);
  auto den_root = exact_root(denominator(base), k);
  if (!num_root || !den_root) return std::nullopt;
  return pow(Rational(*num_root, *den_root), numerator(exponent));
}

}  // namespace pim
