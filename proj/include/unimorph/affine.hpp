#pragma once

#include <vector>

#include "unimorph/geometry.hpp"

namespace unimorph {

// Affine plane map x |-> M x + t with M = [[a, b], [c, d]].
struct AffineMap {
  Rational a = 1, b = 0, c = 0, d = 1;
  Vector t{0, 0};

  Point apply(const Point& p) const {
    return {a * p.x + b * p.y + t.dx, c * p.x + d * p.y + t.dy};
  }
  Vector applyLinear(const Vector& v) const {
    return {a * v.dx + b * v.dy, c * v.dx + d * v.dy};
  }
  Rational det() const { return a * d - b * c; }

  bool operator==(const AffineMap& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d && t == o.t;
  }

  static AffineMap identity() { return {}; }
  static AffineMap translation(const Vector& v) { return {1, 0, 0, 1, v}; }
  static AffineMap shearX(const Rational& s) { return {1, s, 0, 1, {0, 0}}; }
  static AffineMap shearY(const Rational& s) { return {1, 0, s, 1, {0, 0}}; }
  static AffineMap scaleX(const Rational& k) { return {k, 0, 0, 1, {0, 0}}; }
  static AffineMap scaleY(const Rational& k) { return {1, 0, 0, k, {0, 0}}; }
};

// f after g: (f . g)(x) = f(g(x)).
inline AffineMap compose(const AffineMap& f, const AffineMap& g) {
  AffineMap r;
  r.a = f.a * g.a + f.b * g.c;
  r.b = f.a * g.b + f.b * g.d;
  r.c = f.c * g.a + f.d * g.c;
  r.d = f.c * g.b + f.d * g.d;
  r.t = f.applyLinear(g.t) + f.t;
  return r;
}

inline AffineMap inverse(const AffineMap& f) {
  Rational det = f.det();
  if (det == 0)
    throw Error(ErrorCode::DegenerateTriangle, "map is singular");
  AffineMap r;
  r.a = f.d / det;
  r.b = -f.b / det;
  r.c = -f.c / det;
  r.d = f.a / det;
  r.t = -r.applyLinear(f.t);
  return r;
}

// The unique affine map taking corner p_i to q_i.
inline AffineMap affineFromTriangles(const Point& p0, const Point& p1,
                                     const Point& p2, const Point& q0,
                                     const Point& q1, const Point& q2) {
  Vector u1 = p1 - p0, u2 = p2 - p0;
  Rational det = cross(u1, u2);
  if (det == 0)
    throw Error(ErrorCode::DegenerateTriangle,
                "source corners are collinear");
  Vector v1 = q1 - q0, v2 = q2 - q0;
  // M * [u1 u2] = [v1 v2]  =>  M = [v1 v2] * adj([u1 u2]) / det
  AffineMap m;
  m.a = (v1.dx * u2.dy - v2.dx * u1.dy) / det;
  m.b = (v2.dx * u1.dx - v1.dx * u2.dx) / det;
  m.c = (v1.dy * u2.dy - v2.dy * u1.dy) / det;
  m.d = (v2.dy * u1.dx - v1.dy * u2.dx) / det;
  m.t = q0 - Point{m.a * p0.x + m.b * p0.y, m.c * p0.x + m.d * p0.y};
  return m;
}

// True when interpolating x -> f(x) moves every point of the plane along one
// common direction: the columns of M - I and the translation must all be
// parallel.
inline bool mapIsUnidirectional(const AffineMap& f) {
  Vector c1{f.a - 1, f.c}, c2{f.b, f.d - 1};
  return cross(c1, c2) == 0 && cross(c1, f.t) == 0 && cross(c2, f.t) == 0;
}

// Split an orientation-preserving affine map into at most seven factors --
// shears, positive axis scalings, and one translation -- each of which is
// unidirectional, with exact composition (last factor outermost).
//
// Why these factors: interpolating an axis shear or a positive axis scaling
// keeps the intermediate map nonsingular and orientation-preserving for the
// whole of t in [0,1], so applying the factors one by one to a valid drawing
// yields certified steps for free.
inline std::vector<AffineMap> decomposeUnidirectional(const AffineMap& m) {
  if (m.det() <= 0)
    throw Error(ErrorCode::OrientationReversed,
                "map does not preserve orientation");

  // Peel sign-fixing shears off the left until the top-left entry is
  // positive: lin = fix_1 . fix_2 . reduced.
  std::vector<AffineMap> fix;
  AffineMap n = m;
  n.t = {0, 0};
  if (n.a <= 0) {
    if (n.c != 0) {
      Rational s = (1 - n.a) / n.c;
      n = compose(AffineMap::shearX(s), n);  // top-left becomes 1
      fix.push_back(AffineMap::shearX(-s));
    } else {
      // a < 0 and c == 0 (a == c == 0 contradicts det > 0)
      n = compose(AffineMap::shearY(1), n);
      Rational s = (1 - n.a) / n.c;
      n = compose(AffineMap::shearX(s), n);
      fix.push_back(AffineMap::shearY(-1));
      fix.push_back(AffineMap::shearX(-s));
    }
  }

  // n = shearY(c/a) . shearX(b/e) . scaleX(a) . scaleY(e), e = det/a > 0.
  Rational e = n.det() / n.a;
  std::vector<AffineMap> factors;  // in application order
  if (e != 1) factors.push_back(AffineMap::scaleY(e));
  if (n.a != 1) factors.push_back(AffineMap::scaleX(n.a));
  if (n.b != 0) factors.push_back(AffineMap::shearX(n.b / e));
  if (n.c != 0) factors.push_back(AffineMap::shearY(n.c / n.a));
  for (auto it = fix.rbegin(); it != fix.rend(); ++it) factors.push_back(*it);
  if (!m.t.isZero()) factors.push_back(AffineMap::translation(m.t));
  return factors;
}

inline AffineMap composeAll(const std::vector<AffineMap>& factors) {
  AffineMap acc;  // identity
  for (const AffineMap& f : factors) acc = compose(f, acc);
  return acc;
}

}  // namespace unimorph
