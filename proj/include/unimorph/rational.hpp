#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "unimorph/error.hpp"

namespace unimorph {

using BigInt = boost::multiprecision::cpp_int;
// Always stored canonically: reduced, positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const BigInt& x) { return x.sign(); }
inline int sign(const Rational& x) { return x.sign(); }

inline BigInt floorDiv(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline BigInt floorOf(const Rational& x) {
  return floorDiv(numerator(x), denominator(x));
}

inline BigInt ceilOf(const Rational& x) { return -floorOf(-x); }

inline std::string ratToString(const Rational& x) { return x.str(); }

inline double ratToDouble(const Rational& x) { return x.convert_to<double>(); }

// Accepts "123", "-123", "123/456" (den > 0 after sign normalization).
inline Rational ratFromString(const std::string& s) {
  auto bad = [&]() -> Rational {
    throw Error(ErrorCode::ParseError, "bad rational literal '" + s + "'");
  };
  if (s.empty()) return bad();
  std::size_t i = 0;
  auto scanInt = [&]() -> std::string {
    std::size_t begin = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
    if (digits == 0) bad();
    return s.substr(begin, i - begin);
  };
  std::string numPart = scanInt();
  std::string denPart = "1";
  if (i < s.size()) {
    if (s[i] != '/') return bad();
    ++i;
    denPart = scanInt();
    if (i != s.size()) return bad();
  }
  BigInt n(numPart), d(denPart);
  if (d == 0) return bad();
  return Rational(n, d);
}

// Nearest rational of the form k/D (ties round away from zero).
inline Rational roundToDenominator(const Rational& x, const BigInt& D) {
  BigInt n = numerator(x) * D;
  BigInt d = denominator(x);
  BigInt k;
  if (n >= 0) {
    k = floorDiv(2 * n + d, 2 * d);
  } else {
    k = -floorDiv(2 * (-n) + d, 2 * d);
  }
  return Rational(k, D);
}

// floor(sqrt(v)) for v >= 0.
inline BigInt isqrt(const BigInt& v) { return boost::multiprecision::sqrt(v); }

inline bool isPerfectSquare(const BigInt& v, BigInt* root = nullptr) {
  if (v < 0) return false;
  BigInt r = isqrt(v);
  if (r * r != v) return false;
  if (root) *root = r;
  return true;
}

inline std::optional<Rational> exactSqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  BigInt rn, rd;
  if (!isPerfectSquare(numerator(x), &rn)) return std::nullopt;
  if (!isPerfectSquare(denominator(x), &rd)) return std::nullopt;
  return Rational(rn, rd);
}

// Rational r >= 0 with r*r <= x, close to sqrt(x) (absolute slack below
// 2^-32 / denominator scale). The square bound is exact, that is the point.
inline Rational sqrtLower(const Rational& x) {
  if (x < 0) throw Error(ErrorCode::NonPositive, "sqrtLower of negative");
  if (x == 0) return 0;
  const BigInt S = BigInt(1) << 32;
  BigInt n = numerator(x), d = denominator(x);
  BigInt t = isqrt(n * d * S * S);
  Rational r(t, d * S);
  // t = floor(sqrt(n d S^2)) so r^2 = t^2/(d^2 S^2) <= n/d.
  return r;
}

namespace detail {
inline Rational simplestPositive(const Rational& lo, const Rational& hi) {
  // 0 < lo <= hi. Simplest rational in [lo, hi], continued-fraction descent.
  BigInt i = floorOf(lo);
  if (Rational(i) == lo) return lo;
  if (Rational(i + 1) <= hi) return Rational(i + 1);
  Rational fracLo = lo - Rational(i), fracHi = hi - Rational(i);
  return Rational(i) + 1 / simplestPositive(1 / fracHi, 1 / fracLo);
}
}  // namespace detail

// Simplest rational (smallest denominator, then smallest |numerator|) in the
// closed interval [lo, hi].
inline Rational simplestInClosed(Rational lo, Rational hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -detail::simplestPositive(-hi, -lo);
  return detail::simplestPositive(lo, hi);
}

// A low-complexity rational strictly inside (lo, hi), biased to the middle.
inline Rational simpleInsideOpen(const Rational& lo, const Rational& hi) {
  if (!(lo < hi))
    throw Error(ErrorCode::EmptyRegion, "empty open interval");
  Rational w = hi - lo;
  return simplestInClosed(lo + w / 4, hi - w / 4);
}

}  // namespace unimorph
