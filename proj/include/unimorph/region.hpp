#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "unimorph/geometry.hpp"

namespace unimorph {

// Closed or open half-plane: { x : normal . x <= offset }, strict when open.
struct HalfPlane {
  Vector normal;
  Rational offset;
  bool open = false;

  Rational slack(const Point& p) const {
    return offset - (normal.dx * p.x + normal.dy * p.y);
  }
  bool admits(const Point& p) const {
    Rational s = slack(p);
    return open ? s > 0 : s >= 0;
  }
  bool closureAdmits(const Point& p) const { return slack(p) >= 0; }
};

// Half-plane of points weakly (or strictly) left of the directed edge u -> v.
inline HalfPlane leftOfEdge(const Point& u, const Point& v, bool open) {
  Vector n{v.y - u.y, u.x - v.x};  // right normal; left side has n.x <= n.u
  return HalfPlane{n, n.dx * u.x + n.dy * u.y, open};
}

// Band lo <= m(x) <= hi where m(x) = leftNormal(direction) . x; either bound
// may be absent, and each present bound may be open.
struct SlabInterval {
  Vector direction;
  std::optional<Rational> lo, hi;
  bool loOpen = false, hiOpen = false;
};

// Parameter interval of a line clipped against a region.
struct LineClip {
  bool empty = true;
  Rational lo, hi;
  bool loOpen = false, hiOpen = false;
};

inline bool collinearPointOnSegment(const Point& p, const Point& a,
                                    const Point& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed segment intersection test, touching included.
inline bool segmentsIntersect(const Point& a, const Point& b, const Point& c,
                              const Point& d) {
  int o1 = sign(doubledArea(a, b, c));
  int o2 = sign(doubledArea(a, b, d));
  int o3 = sign(doubledArea(c, d, a));
  int o4 = sign(doubledArea(c, d, b));
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
      ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  if (o1 == 0 && collinearPointOnSegment(c, a, b)) return true;
  if (o2 == 0 && collinearPointOnSegment(d, a, b)) return true;
  if (o3 == 0 && collinearPointOnSegment(a, c, d)) return true;
  if (o4 == 0 && collinearPointOnSegment(b, c, d)) return true;
  return false;
}

namespace detail {

// Clip a convex point chain (closed polygon, segment, or point) against the
// closure of a half-plane; preserves counterclockwise order.
inline std::vector<Point> clipChain(const std::vector<Point>& pts,
                                    const HalfPlane& h) {
  if (pts.empty()) return {};
  if (pts.size() == 1) return h.closureAdmits(pts[0]) ? pts : std::vector<Point>{};
  if (pts.size() == 2) {
    Rational va = h.slack(pts[0]), vb = h.slack(pts[1]);
    if (va >= 0 && vb >= 0) return pts;
    if (va < 0 && vb < 0) return {};
    Rational s = va / (va - vb);
    Point cut = pts[0] + (pts[1] - pts[0]) * s;
    if (va >= 0) return {pts[0], cut};
    return {cut, pts[1]};
  }
  std::vector<Point> out;
  std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& cur = pts[i];
    const Point& nxt = pts[(i + 1) % n];
    Rational vc = h.slack(cur), vn = h.slack(nxt);
    if (vc >= 0) out.push_back(cur);
    if ((vc > 0 && vn < 0) || (vc < 0 && vn > 0)) {
      Rational s = vc / (vc - vn);
      out.push_back(cur + (nxt - cur) * s);
    }
  }
  return out;
}

inline bool lexLess(const Point& a, const Point& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Remove duplicates and collinear middles; collapse flat chains to their
// extreme points.
inline std::vector<Point> tidyChain(std::vector<Point> pts) {
  std::vector<Point> dedup;
  for (const Point& p : pts) {
    if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
  }
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  if (dedup.size() <= 2) return dedup;

  bool flat = true;
  for (std::size_t i = 2; i < dedup.size(); ++i) {
    if (orientation(dedup[0], dedup[1], dedup[i]) != Orientation::Collinear) {
      flat = false;
      break;
    }
  }
  if (flat) {
    Point lo = dedup[0], hi = dedup[0];
    for (const Point& p : dedup) {
      if (lexLess(p, lo)) lo = p;
      if (lexLess(hi, p)) hi = p;
    }
    if (lo == hi) return {lo};
    return {lo, hi};
  }

  // Convex and counterclockwise: drop collinear middle vertices.
  for (bool changed = true; changed && dedup.size() > 3;) {
    changed = false;
    for (std::size_t i = 0; i < dedup.size(); ++i) {
      const Point& prev = dedup[(i + dedup.size() - 1) % dedup.size()];
      const Point& next = dedup[(i + 1) % dedup.size()];
      if (orientation(prev, dedup[i], next) == Orientation::Collinear) {
        dedup.erase(dedup.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return dedup;
}

inline std::vector<Point> boxAround(const std::vector<Point>& pts) {
  if (pts.empty()) return {};
  Rational minX = pts[0].x, maxX = pts[0].x, minY = pts[0].y, maxY = pts[0].y;
  for (const Point& p : pts) {
    minX = std::min(minX, p.x);
    maxX = std::max(maxX, p.x);
    minY = std::min(minY, p.y);
    maxY = std::max(maxY, p.y);
  }
  minX -= 1;
  minY -= 1;
  maxX += 1;
  maxY += 1;
  return {{minX, minY}, {maxX, minY}, {maxX, maxY}, {minX, maxY}};
}

}  // namespace detail

// Intersection of finitely many half-planes, some possibly strict. The
// constraint list defines the set exactly; `hull` caches the closure as a
// counterclockwise polygon (possibly degenerate: segment, point, or empty).
// Constraints must bound the set; every factory here guarantees that.
class ConvexRegion {
 public:
  ConvexRegion() = default;

  static ConvexRegion fromConstraints(std::vector<HalfPlane> cs,
                                      const std::vector<Point>& seedHint) {
    ConvexRegion r;
    r.constraints_ = std::move(cs);
    std::vector<Point> chain = detail::boxAround(seedHint);
    for (const HalfPlane& h : r.constraints_) {
      chain = detail::tidyChain(detail::clipChain(chain, h));
      if (chain.empty()) break;
    }
    r.hull_ = chain;
    return r;
  }

  // Counterclockwise triangle; all edges open or all closed.
  static ConvexRegion triangle(const Point& a, const Point& b, const Point& c,
                               bool open) {
    if (orientation(a, b, c) != Orientation::CounterClockwise)
      throw Error(ErrorCode::DegenerateTriangle,
                  "triangle region needs counterclockwise corners");
    ConvexRegion r;
    r.constraints_ = {leftOfEdge(a, b, open), leftOfEdge(b, c, open),
                      leftOfEdge(c, a, open)};
    r.hull_ = {a, b, c};
    return r;
  }

  const std::vector<HalfPlane>& constraints() const { return constraints_; }
  const std::vector<Point>& hull() const { return hull_; }

  bool contains(const Point& p) const {
    for (const HalfPlane& h : constraints_)
      if (!h.admits(p)) return false;
    return true;
  }

  bool closureContains(const Point& p) const {
    for (const HalfPlane& h : constraints_)
      if (!h.closureAdmits(p)) return false;
    return true;
  }

  // All constraints made strict; the interior shares the same closure.
  ConvexRegion interior() const {
    ConvexRegion r = *this;
    for (HalfPlane& h : r.constraints_) h.open = true;
    return r;
  }

  ConvexRegion intersectWith(const ConvexRegion& other) const {
    std::vector<HalfPlane> cs = constraints_;
    cs.insert(cs.end(), other.constraints_.begin(), other.constraints_.end());
    std::vector<Point> seed = hull_;
    seed.insert(seed.end(), other.hull_.begin(), other.hull_.end());
    return fromConstraints(std::move(cs), seed);
  }

  ConvexRegion clippedBy(const HalfPlane& h) const {
    ConvexRegion r = *this;
    r.constraints_.push_back(h);
    r.hull_ = detail::tidyChain(detail::clipChain(r.hull_, h));
    return r;
  }

  // Parameters s with origin + s * dir in the set (exact, openness included).
  LineClip clipLine(const Point& origin, const Vector& dir) const {
    LineClip out;
    std::optional<Rational> lo, hi;
    bool loOpen = false, hiOpen = false;
    for (const HalfPlane& h : constraints_) {
      Rational c = dot(h.normal, dir);
      Rational v = h.slack(origin);  // need s*c <= v (or <)
      if (c == 0) {
        if (v < 0 || (v == 0 && h.open)) return out;
        continue;
      }
      Rational bound = v / c;
      if (c > 0) {
        if (!hi || bound < *hi || (bound == *hi && h.open)) {
          hi = bound;
          hiOpen = h.open;
        }
      } else {
        if (!lo || bound > *lo || (bound == *lo && h.open)) {
          lo = bound;
          loOpen = h.open;
        }
      }
    }
    if (!lo || !hi)
      throw Error(ErrorCode::Unhandled, "line clip against unbounded region");
    if (*lo > *hi) return out;
    if (*lo == *hi && (loOpen || hiOpen)) return out;
    out.empty = false;
    out.lo = *lo;
    out.hi = *hi;
    out.loOpen = loOpen;
    out.hiOpen = hiOpen;
    return out;
  }

  Point centroidOfHull() const {
    if (hull_.empty())
      throw Error(ErrorCode::EmptyRegion, "centroid of empty region");
    Rational x = 0, y = 0;
    for (const Point& p : hull_) {
      x += p.x;
      y += p.y;
    }
    Rational n(static_cast<long>(hull_.size()));
    return {x / n, y / n};
  }

  // A point of the set itself (not merely the closure), when one exists.
  std::optional<Point> representative() const {
    if (hull_.empty()) return std::nullopt;
    if (hull_.size() == 1) {
      if (contains(hull_[0])) return hull_[0];
      return std::nullopt;
    }
    if (hull_.size() == 2) {
      LineClip lc = clipLine(hull_[0], hull_[1] - hull_[0]);
      if (lc.empty) return std::nullopt;
      Rational s = lc.lo == lc.hi ? lc.lo : (lc.lo + lc.hi) / 2;
      return hull_[0] + (hull_[1] - hull_[0]) * s;
    }
    Point c = centroidOfHull();
    if (contains(c)) return c;
    // A positive-area closure always admits its vertex centroid strictly, so
    // reaching here means the closure is flat despite three hull vertices;
    // fall back to scanning hull edges.
    for (std::size_t i = 0; i < hull_.size(); ++i) {
      LineClip lc = clipLine(hull_[i], hull_[(i + 1) % hull_.size()] - hull_[i]);
      if (!lc.empty) {
        Rational s = lc.lo == lc.hi ? lc.lo : (lc.lo + lc.hi) / 2;
        return hull_[i] + (hull_[(i + 1) % hull_.size()] - hull_[i]) * s;
      }
    }
    return std::nullopt;
  }

  bool isEmpty() const { return !representative().has_value(); }

  // True when the closure of this region contains the closure of the other.
  bool closureCovers(const ConvexRegion& other) const {
    for (const Point& p : other.hull_)
      if (!closureContains(p)) return false;
    return true;
  }

 private:
  std::vector<HalfPlane> constraints_;
  std::vector<Point> hull_;
};

// True when the closed polygon is simple: distinct vertices, nondegenerate
// edges, adjacent edges touching only at the shared endpoint, others disjoint.
inline bool polygonIsSimple(const std::vector<Point>& poly) {
  std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (poly[i] == poly[j]) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point &a = poly[i], &b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point &c = poly[j], &d = poly[(j + 1) % n];
      bool shareAB = (j == i + 1);
      bool shareBA = (i == 0 && j == n - 1);
      if (shareAB || shareBA) {
        // Touch only at the shared vertex: the far endpoints must not land
        // on the other edge.
        const Point& shared = shareAB ? b : a;
        const Point& farC = shareAB ? d : c;
        const Point& farA = shareAB ? a : b;
        if (orientation(a, b, farC) == Orientation::Collinear &&
            collinearPointOnSegment(farC, a, b) && !(farC == shared))
          return false;
        if (orientation(c, d, farA) == Orientation::Collinear &&
            collinearPointOnSegment(farA, c, d) && !(farA == shared))
          return false;
        continue;
      }
      if (segmentsIntersect(a, b, c, d)) return false;
    }
  }
  return true;
}

inline Rational polygonDoubledArea(const std::vector<Point>& poly) {
  Rational s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point &a = poly[i], &b = poly[(i + 1) % poly.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return s;
}

// Kernel of a simple polygon: every point that sees the whole interior. The
// polygon may be given in either orientation; the kernel is closed.
inline ConvexRegion kernelOfPolygon(std::vector<Point> poly) {
  if (!polygonIsSimple(poly))
    throw Error(ErrorCode::NotSimple, "kernel of a non-simple polygon");
  if (polygonDoubledArea(poly) < 0) std::reverse(poly.begin(), poly.end());
  std::vector<HalfPlane> cs;
  cs.reserve(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i)
    cs.push_back(leftOfEdge(poly[i], poly[(i + 1) % poly.size()], false));
  return ConvexRegion::fromConstraints(std::move(cs), poly);
}

inline ConvexRegion truncate(const ConvexRegion& region,
                             const SlabInterval& slab) {
  Vector n = leftNormal(slab.direction);
  ConvexRegion out = region;
  if (slab.hi)
    out = out.clippedBy(HalfPlane{n, *slab.hi, slab.hiOpen});
  if (slab.lo)
    out = out.clippedBy(HalfPlane{-n, -*slab.lo, slab.loOpen});
  return out;
}

// Range of leftNormal(direction) . x over the region, with exact attainment
// flags (an unattained bound comes back open).
inline SlabInterval projectOntoNormal(const ConvexRegion& region,
                                      const Vector& direction) {
  if (region.isEmpty())
    throw Error(ErrorCode::EmptyRegion, "projecting an empty region");
  Vector n = leftNormal(direction);
  const std::vector<Point>& hull = region.hull();
  auto value = [&](const Point& p) { return dot(n, p - Point{0, 0}); };

  Rational lo = value(hull[0]), hi = lo;
  for (const Point& p : hull) {
    Rational v = value(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  auto attained = [&](const Rational& bound) {
    std::size_t m = hull.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (value(hull[i]) != bound) continue;
      if (region.contains(hull[i])) return true;
      // The face might be an edge whose interior still meets the set.
      const Point& next = hull[(i + 1) % m];
      if (m > 1 && value(next) == bound) {
        LineClip lc = region.clipLine(hull[i], next - hull[i]);
        if (!lc.empty) return true;
      }
      const Point& prev = hull[(i + m - 1) % m];
      if (m > 1 && value(prev) == bound) {
        LineClip lc = region.clipLine(prev, hull[i] - prev);
        if (!lc.empty) return true;
      }
    }
    return false;
  };

  SlabInterval out;
  out.direction = direction;
  out.lo = lo;
  out.hi = hi;
  out.loOpen = !attained(lo);
  out.hiOpen = !attained(hi);
  return out;
}

// Round the target to a low-complexity point that still lies in the set; the
// exact target is the fallback when snapping fails.
inline std::optional<Point> snapInside(const ConvexRegion& region,
                                       const Point& target) {
  for (int k = 0; k <= 64; k += 4) {
    BigInt d = BigInt(1) << k;
    Point cand{roundToDenominator(target.x, d), roundToDenominator(target.y, d)};
    if (region.contains(cand)) return cand;
  }
  if (region.contains(target)) return target;
  return std::nullopt;
}

}  // namespace unimorph
