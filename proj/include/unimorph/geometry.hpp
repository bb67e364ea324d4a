#pragma once

#include <array>
#include <optional>
#include <tuple>

#include "unimorph/error.hpp"
#include "unimorph/rational.hpp"

namespace unimorph {

struct Vector {
  Rational dx, dy;

  bool operator==(const Vector& o) const { return dx == o.dx && dy == o.dy; }
  bool operator!=(const Vector& o) const { return !(*this == o); }
  Vector operator+(const Vector& o) const { return {dx + o.dx, dy + o.dy}; }
  Vector operator-(const Vector& o) const { return {dx - o.dx, dy - o.dy}; }
  Vector operator-() const { return {-dx, -dy}; }
  Vector operator*(const Rational& s) const { return {dx * s, dy * s}; }
  bool isZero() const { return dx == 0 && dy == 0; }
};

inline Vector operator*(const Rational& s, const Vector& v) { return v * s; }

struct Point {
  Rational x, y;

  bool operator==(const Point& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Point& o) const { return !(*this == o); }
  Point operator+(const Vector& v) const { return {x + v.dx, y + v.dy}; }
  Point operator-(const Vector& v) const { return {x - v.dx, y - v.dy}; }
  Vector operator-(const Point& o) const { return {x - o.x, y - o.y}; }
};

inline Rational cross(const Vector& u, const Vector& v) {
  return u.dx * v.dy - u.dy * v.dx;
}

inline Rational dot(const Vector& u, const Vector& v) {
  return u.dx * v.dx + u.dy * v.dy;
}

inline Rational squaredLength(const Vector& v) { return dot(v, v); }

inline Vector leftNormal(const Vector& v) { return {-v.dy, v.dx}; }

enum class Orientation { Clockwise = -1, Collinear = 0, CounterClockwise = 1 };

inline Orientation orientation(const Point& p, const Point& q, const Point& r) {
  int s = sign(cross(q - p, r - p));
  if (s > 0) return Orientation::CounterClockwise;
  if (s < 0) return Orientation::Clockwise;
  return Orientation::Collinear;
}

// Twice the signed area of triangle (p, q, r); positive when counterclockwise.
inline Rational doubledArea(const Point& p, const Point& q, const Point& r) {
  return cross(q - p, r - p);
}

// Zero vectors count as parallel to everything.
inline bool parallel(const Vector& u, const Vector& v) {
  return cross(u, v) == 0;
}

// Cone of directions spanned CCW from r1 to r2 (attached to an apex by the
// caller).
struct Wedge {
  Vector r1, r2;
};

// Convex-combination weights of x with respect to triangle (a, b, c). The
// weights are signed when x lies outside; they always sum to one.
inline std::array<Rational, 3> barycentric(const Point& x, const Point& a,
                                           const Point& b, const Point& c) {
  Rational denom = doubledArea(a, b, c);
  if (denom == 0)
    throw Error(ErrorCode::DegenerateTriangle, "barycentric on collinear triangle");
  return {doubledArea(x, b, c) / denom, doubledArea(a, x, c) / denom,
          doubledArea(a, b, x) / denom};
}

inline Point fromBarycentric(const std::array<Rational, 3>& w, const Point& a,
                             const Point& b, const Point& c) {
  return {w[0] * a.x + w[1] * b.x + w[2] * c.x,
          w[0] * a.y + w[1] * b.y + w[2] * c.y};
}

// Signed displacement magnitude of a point tracking a triangle whose corners
// move by magnitudes k along a shared direction: the same weighted average.
inline Rational followDisplacement(const std::array<Rational, 3>& w,
                                   const std::array<Rational, 3>& k) {
  if (w[0] + w[1] + w[2] != 1)
    throw Error(ErrorCode::BadWeights, "weights must sum to one");
  return w[0] * k[0] + w[1] * k[1] + w[2] * k[2];
}

// q(t) = a2 t^2 + a1 t + a0.
struct QuadraticPoly {
  Rational a2, a1, a0;

  bool operator==(const QuadraticPoly& o) const {
    return a2 == o.a2 && a1 == o.a1 && a0 == o.a0;
  }
  QuadraticPoly operator-() const { return {-a2, -a1, -a0}; }
  Rational eval(const Rational& t) const { return (a2 * t + a1) * t + a0; }
};

// Signed area over time of a triangle whose corners move linearly from their
// start to their end positions as t runs over [0, 1].
inline QuadraticPoly areaQuadratic(const Point& aStart, const Point& aEnd,
                                   const Point& bStart, const Point& bEnd,
                                   const Point& cStart, const Point& cEnd) {
  Vector u0 = bStart - aStart;
  Vector du = (bEnd - bStart) - (aEnd - aStart);
  Vector v0 = cStart - aStart;
  Vector dv = (cEnd - cStart) - (aEnd - aStart);
  return {cross(du, dv) / 2, (cross(u0, dv) + cross(du, v0)) / 2,
          cross(u0, v0) / 2};
}

// A real root of a quadratic that is not rational: index 0 is the smaller
// root, 1 the larger.
struct AlgebraicRoot {
  QuadraticPoly poly;
  int rootIndex;
};

// Outcome of checking q > 0 for every t in [0, 1]. On failure the witness is
// the leftmost time in [0, 1] with q(t) <= 0; [witnessLo, witnessHi] always
// encloses it exactly, with witnessLo == witnessHi when it is rational.
struct Positivity {
  bool positive = false;
  std::optional<Rational> witnessRational;
  std::optional<AlgebraicRoot> witnessRoot;
  Rational witnessLo, witnessHi;
};

namespace detail {

// Root of q known to be rational (disc a perfect square), by index.
inline Rational rationalRoot(const QuadraticPoly& q, const Rational& sqrtDisc,
                             int index) {
  // Roots (-a1 ± s) / (2 a2); which sign gives the smaller root depends on
  // the sign of a2.
  Rational plus = (-q.a1 + sqrtDisc) / (2 * q.a2);
  Rational minus = (-q.a1 - sqrtDisc) / (2 * q.a2);
  Rational lo = plus < minus ? plus : minus;
  Rational hi = plus < minus ? minus : plus;
  return index == 0 ? lo : hi;
}

inline Positivity failAtRational(const Rational& t) {
  Positivity r;
  r.positive = false;
  r.witnessRational = t;
  r.witnessLo = r.witnessHi = t;
  return r;
}

// Bisect [lo, hi] with q(lo) > 0 and q(hi) <= 0 down to width 2^-48; the
// leftmost sign change is the leftmost nonpositive time in that bracket.
inline Positivity failAtBracketedRoot(const QuadraticPoly& q, Rational lo,
                                      Rational hi, int rootIndex) {
  for (int i = 0; i < 48; ++i) {
    Rational mid = (lo + hi) / 2;
    if (sign(q.eval(mid)) > 0)
      lo = mid;
    else
      hi = mid;
  }
  Positivity r;
  r.positive = false;
  r.witnessRoot = AlgebraicRoot{q, rootIndex};
  r.witnessLo = lo;
  r.witnessHi = hi;
  return r;
}

inline Positivity failAtRoot(const QuadraticPoly& q, const Rational& disc,
                             int index, const Rational& bracketLo,
                             const Rational& bracketHi) {
  if (auto s = exactSqrt(disc)) return failAtRational(rationalRoot(q, *s, index));
  return failAtBracketedRoot(q, bracketLo, bracketHi, index);
}

}  // namespace detail

inline Positivity strictlyPositiveOn01(const QuadraticPoly& q) {
  Positivity yes;
  yes.positive = true;

  const Rational v0 = q.a0;
  if (sign(v0) <= 0) return detail::failAtRational(0);
  const Rational v1 = q.a2 + q.a1 + q.a0;

  if (q.a2 == 0) {
    if (q.a1 == 0) return yes;  // positive constant
    if (sign(v1) > 0) return yes;
    return detail::failAtRational(-q.a0 / q.a1);  // root in (0, 1]
  }

  if (sign(v1) <= 0) {
    // Positive at 0, nonpositive at 1: leftmost crossing in (0, 1].
    Rational disc = q.a1 * q.a1 - 4 * q.a2 * q.a0;
    // Convex: first crossing is the smaller root; concave: q > 0 between its
    // roots and 0 lies there, so the crossing is the larger root.
    int index = q.a2 > 0 ? 0 : 1;
    return detail::failAtRoot(q, disc, index, 0, 1);
  }

  // Positive at both endpoints.
  if (q.a2 < 0) return yes;  // concave: minimum at an endpoint
  Rational vertex = -q.a1 / (2 * q.a2);
  if (vertex <= 0 || vertex >= 1) return yes;  // monotone over [0, 1]
  Rational disc = q.a1 * q.a1 - 4 * q.a2 * q.a0;
  int d = sign(disc);
  if (d < 0) return yes;
  if (d == 0) return detail::failAtRational(vertex);  // tangency from above
  // Dips strictly below between two interior roots; leftmost is the smaller.
  return detail::failAtRoot(q, disc, 0, 0, vertex);
}

}  // namespace unimorph
