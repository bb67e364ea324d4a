#pragma once

// Building a pseudo-morph between two drawings of the same triangulation:
// repeatedly pick an internal vertex of degree at most five, contract it onto
// a neighbour at a position valid in both drawings, recurse on the reduced
// pair, and reinsert on the way back out.  When a degree-4 or degree-5 vertex
// is blocked because contracting it would create a chord of its surrounding
// 4-gon outside that 4-gon, the 4-gon is first made strictly convex by a
// short sequence of certified events (convexify4gon below).

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "unimorph/affine.hpp"
#include "unimorph/error.hpp"
#include "unimorph/geometry.hpp"
#include "unimorph/morph.hpp"
#include "unimorph/region.hpp"
#include "unimorph/triangulation.hpp"
#include "unimorph/verify.hpp"

namespace unimorph {

// A counterclockwise 4-gon that must be made strictly convex, together with
// the chords that must not be created outside it in the meantime.  The
// forbidden chords are the diagonals of the 4-gon that are not already edges.
struct ConvexifyTask {
  std::array<VertexId, 4> quad{};
  std::vector<std::pair<VertexId, VertexId>> forbiddenChords;
};

// How a candidate vertex relates to a convexification task.  Type1: on the
// outer triangle, so it can never move or contract.  Type2: a corner of the
// 4-gon itself.  Type3: contracting it is geometrically possible but would
// create a forbidden chord.  Free: none of the above.
enum class ProblematicType { Type1, Type2, Type3, Free };

namespace detail {

inline std::vector<VertexId> ringOf(const Drawing& d, VertexId v) {
  return d.tri.rotation.at(v);
}

inline std::vector<Point> ringPositions(const Drawing& d,
                                        const std::vector<VertexId>& ring) {
  std::vector<Point> pos;
  pos.reserve(ring.size());
  for (VertexId v : ring) pos.push_back(d.at(v));
  return pos;
}

inline bool sameChord(const std::pair<VertexId, VertexId>& a, VertexId u,
                      VertexId v) {
  return (a.first == u && a.second == v) || (a.first == v && a.second == u);
}

inline bool quadHas(const std::array<VertexId, 4>& quad, VertexId v) {
  return std::find(quad.begin(), quad.end(), v) != quad.end();
}

// Corner determinants of the 4-gon: index i is twice the signed area of
// (q[i-1], q[i], q[i+1]).  All strictly positive == strictly convex and
// counterclockwise.
inline std::array<Rational, 4> quadDets(const Drawing& d,
                                        const std::array<VertexId, 4>& quad) {
  std::array<Rational, 4> dets;
  for (int i = 0; i < 4; ++i)
    dets[i] = doubledArea(d.at(quad[(i + 3) % 4]), d.at(quad[i]),
                          d.at(quad[(i + 1) % 4]));
  return dets;
}

inline bool quadStrictlyConvex(const Drawing& d,
                               const std::array<VertexId, 4>& quad) {
  for (const Rational& det : quadDets(d, quad))
    if (det <= 0) return false;
  return true;
}

// Strict interior test for a simple polygon, by exact ray crossing.  Points
// on the boundary are not inside.
inline bool strictlyInsidePolygon(const std::vector<Point>& poly,
                                  const Point& p) {
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (collinearPointOnSegment(p, poly[i], poly[(i + 1) % n])) return false;
  bool in = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& u = poly[i];
    const Point& v = poly[(i + 1) % n];
    if ((u.y > p.y) != (v.y > p.y)) {
      Rational xint = u.x + (p.y - u.y) * (v.x - u.x) / (v.y - u.y);
      if (xint > p.x) in = !in;
    }
  }
  return in;
}

// Whether ring vertex `i` sees the whole ring polygon: every fan triangle
// from it to a non-incident ring edge is strictly counterclockwise.
inline bool vertexSeesRing(const std::vector<Point>& ring, std::size_t i) {
  std::size_t n = ring.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t k = (j + 1) % n;
    if (j == i || k == i) continue;
    if (doubledArea(ring[i], ring[j], ring[k]) <= 0) return false;
  }
  return true;
}

}  // namespace detail

// Classification of a contraction candidate against a task (see
// ProblematicType).  Intended for internal vertices of degree at most five.
inline ProblematicType classifyProblematic(const Drawing& d,
                                           const ConvexifyTask& task,
                                           VertexId v) {
  if (d.tri.isBoundary(v)) return ProblematicType::Type1;
  if (detail::quadHas(task.quad, v)) return ProblematicType::Type2;
  for (const auto& chord : task.forbiddenChords) {
    if (!d.tri.hasEdge(v, chord.first) || !d.tri.hasEdge(v, chord.second))
      continue;
    std::vector<VertexId> ring = detail::ringOf(d, v);
    std::vector<Point> pos = detail::ringPositions(d, ring);
    for (VertexId t : {chord.first, chord.second}) {
      std::size_t i =
          std::find(ring.begin(), ring.end(), t) - ring.begin();
      if (detail::vertexSeesRing(pos, i)) return ProblematicType::Type3;
    }
  }
  return ProblematicType::Free;
}

// A guided move: `mover` walks toward `target` while each tracked vertex
// keeps its barycentric coordinates in the frame (mover, frameB, frameC), so
// all displacements stay parallel to the mover's displacement.
struct MoveSpec {
  VertexId mover = 0;
  Point target;
  VertexId frameB = 0, frameC = 0;
  std::vector<VertexId> tracked;
};

namespace detail {

// Full-extent end position (s = 1) of every moving vertex.
inline std::map<VertexId, Point> fullMoveEnds(const Drawing& d,
                                              const MoveSpec& mv) {
  std::map<VertexId, Point> ends;
  ends[mv.mover] = mv.target;
  const Point& b = d.at(mv.frameB);
  const Point& c = d.at(mv.frameC);
  for (VertexId v : mv.tracked) {
    auto w = barycentric(d.at(v), d.at(mv.mover), b, c);
    ends[v] = fromBarycentric(w, mv.target, b, c);
  }
  return ends;
}

inline Point positionAt(const Drawing& d,
                        const std::map<VertexId, Point>& ends, VertexId v,
                        const Rational& s) {
  auto it = ends.find(v);
  if (it == ends.end()) return d.at(v);
  return d.at(v) + (it->second - d.at(v)) * s;
}

// Area-over-time polynomial for three vertices under the full move.
inline QuadraticPoly movingArea(const Drawing& d,
                                const std::map<VertexId, Point>& ends,
                                VertexId a, VertexId b, VertexId c) {
  auto end = [&](VertexId v) -> const Point& {
    auto it = ends.find(v);
    return it == ends.end() ? d.at(v) : it->second;
  };
  return areaQuadratic(d.at(a), end(a), d.at(b), end(b), d.at(c), end(c));
}

struct FeasibilitySpec {
  std::vector<QuadraticPoly> path;  // must stay positive on [0, s]
  std::vector<QuadraticPoly> end;   // must be positive at s
};

inline bool feasibleAt(const FeasibilitySpec& fs, const Rational& s) {
  for (const QuadraticPoly& q : fs.end)
    if (q.eval(s) <= 0) return false;
  for (const QuadraticPoly& q : fs.path) {
    QuadraticPoly scaled{q.a2 * s * s, q.a1 * s, q.a0};
    if (!strictlyPositiveOn01(scaled).positive) return false;
  }
  return true;
}

// Candidate parameters between the sign breakpoints of the constraint
// polynomials inside (0,1), in increasing order.  Irrational roots are
// bracketed by exact bisection; the brackets only shrink the candidate gaps,
// never admit a wrong answer, because every candidate is re-tested exactly.
inline std::vector<Rational> candidateParameters(const FeasibilitySpec& fs,
                                                 int bisections) {
  std::vector<Rational> pts{Rational(0), Rational(1)};
  auto addRoot = [&](const Rational& r) {
    if (r > 0 && r < 1) pts.push_back(r);
  };
  std::vector<QuadraticPoly> all = fs.path;
  all.insert(all.end(), fs.end.begin(), fs.end.end());
  for (const QuadraticPoly& q : all) {
    if (q.a2 == 0 && q.a1 == 0) continue;
    if (q.a2 == 0) {
      addRoot(-q.a0 / q.a1);
      continue;
    }
    Rational disc = q.a1 * q.a1 - 4 * q.a2 * q.a0;
    if (disc < 0) continue;
    if (auto s = exactSqrt(disc)) {
      addRoot((-q.a1 + *s) / (2 * q.a2));
      addRoot((-q.a1 - *s) / (2 * q.a2));
      continue;
    }
    // Two irrational roots straddling the vertex; each side of the vertex
    // holds at most one, detected by a sign flip and bracketed by bisection.
    Rational vx = -q.a1 / (2 * q.a2);
    Rational vc = vx < 0 ? Rational(0) : (vx > 1 ? Rational(1) : vx);
    const std::array<std::pair<Rational, Rational>, 2> sides{
        {{Rational(0), vc}, {vc, Rational(1)}}};
    for (const auto& side : sides) {
      Rational lo = side.first, hi = side.second;
      if (lo >= hi) continue;
      Rational flo = q.eval(lo), fhi = q.eval(hi);
      if (flo == 0) addRoot(lo);
      if (fhi == 0) addRoot(hi);
      if (flo == 0 || fhi == 0) continue;
      if ((flo > 0) == (fhi > 0)) continue;
      for (int it = 0; it < bisections; ++it) {
        Rational mid = (lo + hi) / 2;
        Rational fm = q.eval(mid);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      addRoot(lo);
      if (hi != lo) addRoot(hi);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Rational> cands;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    cands.push_back((pts[i] + pts[i + 1]) / 2);
  return cands;
}

inline std::optional<Rational> firstFeasibleParameter(
    const FeasibilitySpec& fs) {
  for (int round = 0; round < 3; ++round) {
    for (const Rational& s : candidateParameters(fs, 24 << round))
      if (feasibleAt(fs, s)) return s;
  }
  return std::nullopt;
}

inline std::vector<std::array<VertexId, 3>> facesTouching(
    const Triangulation& t, const std::map<VertexId, Point>& ends) {
  std::vector<std::array<VertexId, 3>> out;
  for (const auto& f : internalFaces(t))
    if (ends.count(f[0]) || ends.count(f[1]) || ends.count(f[2]))
      out.push_back(f);
  return out;
}

}  // namespace detail

// Parameter search used by the boundary cases: find s in (0,1) so that the
// partial move to s keeps every touched face strictly positive throughout
// and leaves every listed 4-gon strictly convex at s.  Throws
// NoFeasibleParameter when the constraint system has no rational witness.
inline Rational convexifyParameter(
    const Drawing& d, const MoveSpec& mv,
    const std::vector<std::array<VertexId, 4>>& quads) {
  auto ends = detail::fullMoveEnds(d, mv);
  detail::FeasibilitySpec fs;
  for (const auto& f : detail::facesTouching(d.tri, ends))
    fs.path.push_back(detail::movingArea(d, ends, f[0], f[1], f[2]));
  for (const auto& q : quads)
    for (int i = 0; i < 4; ++i)
      fs.end.push_back(detail::movingArea(d, ends, q[(i + 3) % 4], q[i],
                                          q[(i + 1) % 4]));
  if (auto s = detail::firstFeasibleParameter(fs)) return *s;
  throw Error(ErrorCode::NoFeasibleParameter,
              "no partial move of vertex " + std::to_string(mv.mover) +
                  " makes the 4-gon strictly convex");
}

namespace detail {

// Outcome of one convexification (or one pass of it): the emitted events and
// the drawing they lead to.
struct ConvexifyOutcome {
  PseudoMorph events;
  Drawing end;
};

inline Drawing applyMove(const Drawing& d, const std::map<VertexId, Point>& ends,
                         const Rational& s) {
  Drawing out = d;
  for (const auto& kv : ends) out.coords[kv.first] = positionAt(d, ends, kv.first, s);
  return out;
}

inline void appendEvents(PseudoMorph& into, const PseudoMorph& from) {
  into.events.insert(into.events.end(), from.events.begin(), from.events.end());
}

// Insert the static coordinates of stripped vertices into every linear target
// so that events built on a sub-drawing replay on the full drawing.
inline PseudoMorph liftEvents(const PseudoMorph& pm,
                              const std::map<VertexId, Point>& statics) {
  PseudoMorph out;
  for (const Event& e : pm.events) {
    if (std::holds_alternative<LinearEvent>(e)) {
      LinearEvent le = std::get<LinearEvent>(e);
      for (const auto& [v, p] : statics) le.target.emplace(v, p);
      out.events.emplace_back(std::move(le));
    } else {
      NestedEvent ne = std::get<NestedEvent>(e);
      ne.inner = liftEvents(ne.inner, statics);
      out.events.emplace_back(std::move(ne));
    }
  }
  return out;
}

// Remove `removed` (all of them on the current outer triangle) and declare
// `newBoundary` as the outer triangle of the remainder.
inline Drawing stripVertices(const Drawing& d,
                             const std::vector<VertexId>& removed,
                             const std::array<VertexId, 3>& newBoundary) {
  Drawing sub;
  sub.tri.boundary = newBoundary;
  auto isRemoved = [&](VertexId v) {
    return std::find(removed.begin(), removed.end(), v) != removed.end();
  };
  for (const auto& [v, rot] : d.tri.rotation) {
    if (isRemoved(v)) continue;
    std::vector<VertexId> kept;
    for (VertexId w : rot)
      if (!isRemoved(w)) kept.push_back(w);
    sub.tri.rotation.emplace(v, std::move(kept));
    sub.coords.emplace(v, d.at(v));
  }
  // Boundary rotations are stored starting at the successor on the outer
  // cycle, so rotate each new boundary vertex's list into that form.
  for (int i = 0; i < 3; ++i) {
    VertexId b = newBoundary[i];
    VertexId succ = newBoundary[(i + 1) % 3];
    auto& rot = sub.tri.rotation.at(b);
    auto it = std::find(rot.begin(), rot.end(), succ);
    if (it == rot.end())
      throw Error(ErrorCode::Misclassified,
                  "stripped drawing has a broken outer cycle");
    std::rotate(rot.begin(), it, rot.end());
  }
  return sub;
}

inline Drawing mergeBack(const Drawing& full, const Drawing& subEnd,
                         const std::vector<VertexId>& removed) {
  Drawing out = full;
  for (const auto& [v, p] : subEnd.coords) out.coords[v] = p;
  (void)removed;
  return out;
}

// Corner whose 4-gon neighbours are the tail and head of one outer-triangle
// edge, in that order: every point of the drawing's interior lies left of
// that edge, so the corner determinant orient(tail, corner, head) is negative
// wherever the corner could ever be.  Such a 4-gon can never turn convex.
inline std::optional<int> pinnedCorner(const Drawing& d,
                                       const std::array<VertexId, 4>& quad) {
  auto dets = quadDets(d, quad);
  const auto& b = d.tri.boundary;
  for (int i = 0; i < 4; ++i) {
    if (dets[i] > 0) continue;
    VertexId prev = quad[(i + 3) % 4];
    VertexId next = quad[(i + 1) % 4];
    for (int j = 0; j < 3; ++j)
      if (b[j] == prev && b[(j + 1) % 3] == next) return i;
  }
  return std::nullopt;
}

inline VertexId commonInternalNeighbor(const Drawing& d, VertexId a,
                                       VertexId b) {
  std::optional<VertexId> found;
  for (VertexId u : d.tri.rotation.at(a)) {
    if (d.tri.isBoundary(u) || !d.tri.hasEdge(u, b)) continue;
    if (found)
      throw Error(ErrorCode::Misclassified,
                  "outer edge has more than one interior apex");
    found = u;
  }
  if (!found)
    throw Error(ErrorCode::Misclassified,
                "outer edge has no interior apex");
  return *found;
}

}  // namespace detail

inline detail::ConvexifyOutcome convexify4gon(const Drawing& d,
                                              const ConvexifyTask& task);

namespace detail {

// Paper case of a degree-3 outer vertex z1 with interior apex y: either the
// 4-gon avoids z1 and the instance shrinks by dropping z1, or z1 is a corner
// of the 4-gon and y slides toward z1 carrying the interior of the triangle
// (y, z2, z3) along barycentrically.
inline ConvexifyOutcome caseA(const Drawing& d, const ConvexifyTask& task,
                              VertexId z1) {
  const auto& b = d.tri.boundary;
  int zi = int(std::find(b.begin(), b.end(), z1) - b.begin());
  if (zi == 3 || d.tri.degree(z1) != 3)
    throw Error(ErrorCode::Misclassified,
                "expected a degree-three outer vertex");
  VertexId z2 = b[(zi + 1) % 3], z3 = b[(zi + 2) % 3];
  std::optional<VertexId> apex;
  for (VertexId u : d.tri.rotation.at(z1))
    if (u != z2 && u != z3) apex = u;
  if (!apex || !d.tri.hasEdge(*apex, z2) || !d.tri.hasEdge(*apex, z3))
    throw Error(ErrorCode::Misclassified,
                "degree-three outer vertex has no interior apex");
  VertexId y = *apex;

  if (!quadHas(task.quad, z1)) {
    Drawing sub = stripVertices(d, {z1}, {z2, z3, y});
    ConvexifyOutcome inner = convexify4gon(sub, task);
    std::map<VertexId, Point> statics{{z1, d.at(z1)}};
    return {liftEvents(inner.events, statics),
            mergeBack(d, inner.end, {z1})};
  }

  if (quadStrictlyConvex(d, task.quad)) return {{}, d};

  MoveSpec mv;
  mv.mover = y;
  mv.target = d.at(z1);
  mv.frameB = z2;
  mv.frameC = z3;
  for (const auto& kv : d.coords)
    if (!d.tri.isBoundary(kv.first) && kv.first != y)
      mv.tracked.push_back(kv.first);
  Rational s = convexifyParameter(d, mv, {task.quad});
  Drawing end = applyMove(d, fullMoveEnds(d, mv), s);
  if (!quadStrictlyConvex(end, task.quad))
    throw Error(ErrorCode::Unhandled,
                "partial move failed to make the 4-gon convex");
  PseudoMorph pm;
  pm.events.emplace_back(LinearEvent{end.coords});
  return {std::move(pm), std::move(end)};
}

// Paper case of all three outer vertices having degree four: the second
// layer is an interior triangle T = (y1, y2, y3).  Either the 4-gon lives
// strictly inside T and the three outer vertices drop, or a corner of T
// slides toward an adjacent outer vertex, carrying the interior of T.
inline ConvexifyOutcome caseB(const Drawing& d, const ConvexifyTask& task) {
  const auto& b = d.tri.boundary;
  for (VertexId z : b)
    if (d.tri.degree(z) != 4)
      throw Error(ErrorCode::Misclassified,
                  "expected every outer vertex to have degree four");
  VertexId z1 = b[0], z2 = b[1], z3 = b[2];
  VertexId y3 = commonInternalNeighbor(d, z1, z2);
  VertexId y1 = commonInternalNeighbor(d, z2, z3);
  VertexId y2 = commonInternalNeighbor(d, z3, z1);
  if (y1 == y2 || y2 == y3 || y1 == y3 || !d.tri.hasEdge(y1, y2) ||
      !d.tri.hasEdge(y2, y3) || !d.tri.hasEdge(y3, y1) ||
      doubledArea(d.at(y1), d.at(y2), d.at(y3)) <= 0)
    throw Error(ErrorCode::Misclassified,
                "second layer is not an interior triangle");

  std::vector<VertexId> zIn, yIn, othersIn;
  for (VertexId q : task.quad) {
    if (q == z1 || q == z2 || q == z3)
      zIn.push_back(q);
    else if (q == y1 || q == y2 || q == y3)
      yIn.push_back(q);
    else
      othersIn.push_back(q);
  }

  if (zIn.empty()) {
    Drawing sub = stripVertices(d, {z1, z2, z3}, {y1, y2, y3});
    ConvexifyOutcome inner = convexify4gon(sub, task);
    std::map<VertexId, Point> statics{
        {z1, d.at(z1)}, {z2, d.at(z2)}, {z3, d.at(z3)}};
    return {liftEvents(inner.events, statics),
            mergeBack(d, inner.end, {z1, z2, z3})};
  }

  if (quadStrictlyConvex(d, task.quad)) return {{}, d};

  auto trackedInsideT = [&]() {
    std::vector<VertexId> tracked;
    for (const auto& kv : d.coords) {
      VertexId v = kv.first;
      if (!d.tri.isBoundary(v) && v != y1 && v != y2 && v != y3)
        tracked.push_back(v);
    }
    return tracked;
  };
  auto frameOf = [&](VertexId mover) -> std::pair<VertexId, VertexId> {
    std::array<VertexId, 3> ys{y1, y2, y3};
    std::vector<VertexId> rest;
    for (VertexId y : ys)
      if (y != mover) rest.push_back(y);
    return {rest[0], rest[1]};
  };
  auto attempt = [&](VertexId mover, VertexId target,
                     const std::vector<std::array<VertexId, 4>>& quads)
      -> std::optional<ConvexifyOutcome> {
    MoveSpec mv;
    mv.mover = mover;
    mv.target = d.at(target);
    std::tie(mv.frameB, mv.frameC) = frameOf(mover);
    mv.tracked = trackedInsideT();
    try {
      Rational s = convexifyParameter(d, mv, quads);
      Drawing end = applyMove(d, fullMoveEnds(d, mv), s);
      if (!quadStrictlyConvex(end, task.quad)) return std::nullopt;
      PseudoMorph pm;
      pm.events.emplace_back(LinearEvent{end.coords});
      return ConvexifyOutcome{std::move(pm), std::move(end)};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoFeasibleParameter) return std::nullopt;
      throw;
    }
  };

  if (zIn.size() == 2 && yIn.size() == 2 && othersIn.empty()) {
    // The 4-gon straddles one outer edge.  Prefer the corner of T that does
    // not lie on the drawn diagonal of the 4-gon, moving toward an outer
    // corner adjacent to it along the 4-gon.
    std::optional<std::pair<VertexId, VertexId>> diag;
    if (d.tri.hasEdge(task.quad[0], task.quad[2]))
      diag = {task.quad[0], task.quad[2]};
    else if (d.tri.hasEdge(task.quad[1], task.quad[3]))
      diag = {task.quad[1], task.quad[3]};
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (int i = 0; i < 4; ++i) {
      VertexId y = task.quad[i];
      if (std::find(yIn.begin(), yIn.end(), y) == yIn.end()) continue;
      for (int off : {1, 3}) {
        VertexId z = task.quad[(i + off) % 4];
        if (std::find(zIn.begin(), zIn.end(), z) == zIn.end()) continue;
        bool yOnDiag = diag && (diag->first == y || diag->second == y);
        bool zOnDiag = diag && (diag->first == z || diag->second == z);
        if (diag && !yOnDiag && zOnDiag)
          pairs.insert(pairs.begin(), {y, z});
        else
          pairs.emplace_back(y, z);
      }
    }
    for (const auto& [mover, target] : pairs)
      if (auto out = attempt(mover, target, {task.quad})) return *out;
    throw Error(ErrorCode::NoFeasibleParameter,
                "no corner of the interior triangle admits a convexifying "
                "partial move");
  }

  if (zIn.size() == 1 && yIn.size() == 2 && othersIn.size() == 1) {
    // One corner is an outer vertex, one lies strictly inside T.  The free
    // corner of T moves; the auxiliary 4-gon through it must turn convex
    // together with the original one.
    VertexId zq = zIn[0];
    VertexId mover = y1;
    for (VertexId y : {y1, y2, y3})
      if (std::find(yIn.begin(), yIn.end(), y) == yIn.end()) mover = y;
    std::array<VertexId, 4> quad2{zq, yIn[0], mover, yIn[1]};
    {
      Rational area = 0;
      for (int i = 0; i < 4; ++i)
        area += cross(d.at(quad2[i]) - d.at(quad2[0]),
                      d.at(quad2[(i + 1) % 4]) - d.at(quad2[0]));
      if (area < 0) std::swap(quad2[1], quad2[3]);
    }
    for (VertexId target : {z1, z2, z3}) {
      if (target == zq || !d.tri.hasEdge(mover, target)) continue;
      if (auto out = attempt(mover, target, {quad2, task.quad})) return *out;
    }
    throw Error(ErrorCode::NoFeasibleParameter,
                "no partial move of the free interior corner convexifies the "
                "straddling 4-gon");
  }

  throw Error(ErrorCode::Unhandled,
              "4-gon touches the outer triangle in an unexpected pattern");
}

// A vertex whose contraction keeps both the triangulation and the task
// intact: internal, small degree, not a corner of the 4-gon, and not about
// to create a forbidden chord outside the 4-gon.
inline std::optional<std::pair<VertexId, VertexId>> freeContraction(
    const Drawing& d, const ConvexifyTask& task) {
  std::vector<Point> quadPoly;
  for (VertexId q : task.quad) quadPoly.push_back(d.at(q));
  // A chord between two 4-gon corners runs either entirely inside or
  // entirely outside the 4-gon; its midpoint decides which.  Only chords
  // outside are destructive.
  auto chordOutside = [&](VertexId u, VertexId w) {
    Point mid{(d.at(u).x + d.at(w).x) / 2, (d.at(u).y + d.at(w).y) / 2};
    return !strictlyInsidePolygon(quadPoly, mid);
  };
  for (VertexId v : lowDegreeInternalVertices(d.tri)) {
    if (quadHas(task.quad, v)) continue;
    std::vector<VertexId> ring = ringOf(d, v);
    for (VertexId w : ring) {
      if (!canContract(d, v, w).ok) continue;
      // Contracting v onto w adds edges from w to the ring vertices not
      // adjacent to w; refuse any that realises a forbidden chord outside
      // the 4-gon.
      std::vector<VertexId> r = ringStartingAt(ringOf(d, v), w);
      bool blocked = false;
      for (std::size_t i = 2; i + 1 < r.size() && !blocked; ++i)
        for (const auto& chord : task.forbiddenChords)
          if (sameChord(chord, w, r[i]) && chordOutside(w, r[i]))
            blocked = true;
      if (!blocked) return std::make_pair(v, w);
    }
  }
  return std::nullopt;
}

// Move a reflex internal corner of the 4-gon into the region where its link
// stays star-shaped and all three corner determinants it controls turn
// strictly positive.
inline std::optional<LinearEvent> cornerKernelMove(const Drawing& d,
                                                   const ConvexifyTask& task) {
  auto dets = quadDets(d, task.quad);
  for (int i = 0; i < 4; ++i) {
    if (dets[i] > 0) continue;
    VertexId c = task.quad[i];
    if (d.tri.isBoundary(c)) continue;
    VertexId prev = task.quad[(i + 3) % 4];
    VertexId next = task.quad[(i + 1) % 4];
    VertexId opp = task.quad[(i + 2) % 4];
    ConvexRegion r =
        kernelOfPolygon(ringPositions(d, ringOf(d, c))).interior();
    r = r.clippedBy(leftOfEdge(d.at(next), d.at(prev), true));
    r = r.clippedBy(leftOfEdge(d.at(opp), d.at(prev), true));
    r = r.clippedBy(leftOfEdge(d.at(next), d.at(opp), true));
    auto rep = r.representative();
    if (!rep) continue;
    Drawing end = d;
    end.coords[c] = *rep;
    return LinearEvent{end.coords};
  }
  return std::nullopt;
}

// Shift a chord-blocked vertex close to the blocking endpoint it can see, as
// a bounded unblocking heuristic; the segment stays inside the open kernel
// of its link, so the move is planar by itself.
inline std::optional<LinearEvent> chordNudge(const Drawing& d,
                                             const ConvexifyTask& task) {
  for (VertexId v : lowDegreeInternalVertices(d.tri)) {
    if (quadHas(task.quad, v)) continue;
    if (classifyProblematic(d, task, v) != ProblematicType::Type3) continue;
    std::vector<VertexId> ring = ringOf(d, v);
    std::vector<Point> pos = ringPositions(d, ring);
    auto kern = kernelOfPolygon(pos).interior();
    auto rep = kern.representative();
    if (!rep) continue;
    for (const auto& chord : task.forbiddenChords) {
      if (!d.tri.hasEdge(v, chord.first) || !d.tri.hasEdge(v, chord.second))
        continue;
      for (VertexId t : {chord.first, chord.second}) {
        std::size_t i = std::find(ring.begin(), ring.end(), t) - ring.begin();
        if (i == ring.size() || !vertexSeesRing(pos, i)) continue;
        Point m = d.at(t) + (*rep - d.at(t)) * Rational(1, 8);
        if (m == d.at(v) || !kern.contains(m)) continue;
        Drawing end = d;
        end.coords[v] = m;
        return LinearEvent{end.coords};
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Make the task's 4-gon strictly convex by certified events: contract free
// vertices out of the way, move reflex corners inside their link kernels,
// nudge chord-blocked vertices, and fall back to the two boundary cases.
// Returns the events and the resulting drawing; the 4-gon's corners and the
// outer triangle never change combinatorially.
inline detail::ConvexifyOutcome convexify4gon(const Drawing& d,
                                              const ConvexifyTask& task) {
  for (VertexId q : task.quad)
    if (!d.tri.hasVertex(q))
      throw Error(ErrorCode::Misclassified, "4-gon corner missing");
  {
    Rational area = 0;
    for (int i = 0; i < 4; ++i)
      area += cross(d.at(task.quad[i]) - d.at(task.quad[0]),
                    d.at(task.quad[(i + 1) % 4]) - d.at(task.quad[0]));
    if (area <= 0)
      throw Error(ErrorCode::Misclassified,
                  "4-gon is not counterclockwise");
  }
  if (detail::pinnedCorner(d, task.quad))
    throw Error(ErrorCode::NoFeasibleParameter,
                "4-gon corner is pinned behind an outer edge and can never "
                "be convex");
  Drawing cur = d;
  PseudoMorph pm;
  int guard = 4 * int(d.coords.size()) + 16;
  int nudges = 0;
  while (guard-- > 0) {
    if (detail::quadStrictlyConvex(cur, task.quad)) return {pm, cur};

    if (auto fc = detail::freeContraction(cur, task)) {
      auto [v, w] = *fc;
      ContractResult r = contract(cur, v, w);
      detail::ConvexifyOutcome inner = convexify4gon(r.drawing, task);
      auto ringPos =
          detail::ringPositions(inner.end, r.record.ring);
      auto rep = kernelOfPolygon(ringPos).interior().representative();
      if (!rep)
        throw Error(ErrorCode::ReinsertionFailure,
                    "no room to reinsert vertex " + std::to_string(v));
      NestedEvent ne{v, w, r.record, std::move(inner.events), *rep};
      cur = uncontract(inner.end, r.record, *rep);
      pm.events.emplace_back(std::move(ne));
      continue;
    }
    if (auto ev = detail::cornerKernelMove(cur, task)) {
      cur.coords = ev->target;
      pm.events.emplace_back(std::move(*ev));
      continue;
    }
    if (nudges < 8) {
      if (auto ev = detail::chordNudge(cur, task)) {
        ++nudges;
        cur.coords = ev->target;
        pm.events.emplace_back(std::move(*ev));
        continue;
      }
    }
    bool usedBoundaryCase = false;
    for (VertexId z : cur.tri.boundary) {
      if (cur.tri.degree(z) == 3) {
        detail::ConvexifyOutcome out = detail::caseA(cur, task, z);
        detail::appendEvents(pm, out.events);
        cur = out.end;
        usedBoundaryCase = true;
        break;
      }
    }
    if (usedBoundaryCase) continue;
    if (cur.tri.degree(cur.tri.boundary[0]) == 4 &&
        cur.tri.degree(cur.tri.boundary[1]) == 4 &&
        cur.tri.degree(cur.tri.boundary[2]) == 4) {
      detail::ConvexifyOutcome out = detail::caseB(cur, task);
      detail::appendEvents(pm, out.events);
      cur = out.end;
      continue;
    }
    throw Error(ErrorCode::Unhandled,
                "no applicable convexification move");
  }
  throw Error(ErrorCode::Unhandled, "convexification did not terminate");
}

// -------------------------------------------------------------------------
// Contraction selection over a pair of drawings.
// -------------------------------------------------------------------------

struct DirectContraction {
  VertexId p = 0, a = 0;
};
struct NeedsConvexify {
  VertexId p = 0;
  ConvexifyTask task;
};
struct Exhausted {
  std::string detail;
};
using ContractionChoice =
    std::variant<DirectContraction, NeedsConvexify, Exhausted>;

namespace detail {

inline ConvexifyTask taskForQuad(const Drawing& d,
                                 const std::array<VertexId, 4>& quad) {
  ConvexifyTask task;
  task.quad = quad;
  for (int i = 0; i < 2; ++i) {
    VertexId u = quad[i], v = quad[i + 2];
    if (!d.tri.hasEdge(u, v)) task.forbiddenChords.emplace_back(u, v);
  }
  return task;
}

inline std::vector<ContractionChoice> contractionCandidates(
    const Drawing& d1, const Drawing& d2) {
  std::vector<ContractionChoice> out;
  std::vector<VertexId> cands = lowDegreeInternalVertices(d1.tri);
  for (VertexId p : cands)
    for (VertexId a : ringOf(d1, p))
      if (canContract(d1, p, a).ok && canContract(d2, p, a).ok)
        out.push_back(DirectContraction{p, a});
  for (VertexId p : cands) {
    if (d1.tri.degree(p) != 4) continue;
    std::vector<VertexId> ring = ringOf(d1, p);
    std::array<VertexId, 4> quad{ring[0], ring[1], ring[2], ring[3]};
    ConvexifyTask task = taskForQuad(d1, quad);
    // Both diagonals already drawn elsewhere: contracting p can only ever
    // duplicate an edge, so p is not a candidate at all.
    if (task.forbiddenChords.empty()) continue;
    if (pinnedCorner(d1, quad) || pinnedCorner(d2, quad)) continue;
    out.push_back(NeedsConvexify{p, task});
  }
  for (VertexId p : cands) {
    if (d1.tri.degree(p) != 5) continue;
    std::vector<VertexId> ring = ringOf(d1, p);
    for (std::size_t i = 0; i < 5; ++i) {
      VertexId x = ring[i], b = ring[(i + 1) % 5], y = ring[(i + 2) % 5];
      if (d1.tri.hasEdge(x, y)) continue;
      ConvexifyTask task;
      task.quad = {x, b, y, p};
      task.forbiddenChords.emplace_back(x, y);
      if (pinnedCorner(d1, task.quad) || pinnedCorner(d2, task.quad)) continue;
      out.push_back(NeedsConvexify{p, task});
    }
  }
  return out;
}

}  // namespace detail

// First workable contraction over the pair: a vertex and neighbour that
// contract cleanly in both drawings, else a blocked low-degree vertex whose
// surrounding 4-gon must be made convex first, else exhaustion.
inline ContractionChoice selectContraction(const Drawing& d1,
                                           const Drawing& d2) {
  auto cands = detail::contractionCandidates(d1, d2);
  if (!cands.empty()) return cands.front();
  return Exhausted{"no internal vertex of degree at most five contracts in "
                   "both drawings, and none qualifies for convexification"};
}

// -------------------------------------------------------------------------
// Boundary normalization: affinely carry the second drawing onto the first
// drawing's outer triangle, and express the inverse carry as at most seven
// unidirectional linear events appended after the aligned core.
// -------------------------------------------------------------------------

struct BoundaryAlignment {
  Drawing aligned;                // second drawing mapped onto d1's triangle
  std::vector<LinearEvent> tail;  // aligned -> original second drawing
};

inline BoundaryAlignment normalizeBoundary(const Drawing& d1,
                                           const Drawing& d2) {
  const auto& b1 = d1.tri.boundary;
  const auto& b2 = d2.tri.boundary;
  AffineMap m = affineFromTriangles(d2.at(b2[0]), d2.at(b2[1]), d2.at(b2[2]),
                                    d1.at(b1[0]), d1.at(b1[1]), d1.at(b1[2]));
  BoundaryAlignment out;
  out.aligned = d2;
  if (m == AffineMap::identity()) return out;
  for (auto& [v, p] : out.aligned.coords) p = m.apply(p);
  CoordMap cur = out.aligned.coords;
  for (const AffineMap& f : decomposeUnidirectional(inverse(m))) {
    for (auto& [v, p] : cur) p = f.apply(p);
    out.tail.push_back(LinearEvent{cur});
  }
  if (cur != d2.coords)
    throw Error(ErrorCode::Unhandled,
                "boundary normalization did not close exactly");
  return out;
}

namespace detail {

// Pseudo-morph between two drawings whose coordinates agree on the outer
// triangle.  Tries every candidate contraction in order and backtracks on
// failure, so an emitted result is always fully replayable.
inline PseudoMorph buildAlignedPair(const Drawing& d1, const Drawing& d2) {
  if (coordsEqual(d1, d2)) return {};
  if (d1.coords.size() == 3) {
    if (!coordsEqual(d1, d2))
      throw Error(ErrorCode::Unhandled,
                  "triangle drawings expected to coincide");
    return {};
  }
  auto cands = contractionCandidates(d1, d2);
  std::vector<std::string> reasons;
  int attempts = 0;
  for (const ContractionChoice& choice : cands) {
    if (++attempts > 24) break;
    try {
      if (std::holds_alternative<DirectContraction>(choice)) {
        auto [p, a] = std::get<DirectContraction>(choice);
        ContractResult r1 = contract(d1, p, a);
        ContractResult r2 = contract(d2, p, a);
        PseudoMorph inner = buildAlignedPair(r1.drawing, r2.drawing);
        PseudoMorph pm;
        pm.events.emplace_back(
            NestedEvent{p, a, r1.record, std::move(inner), d2.at(p)});
        return pm;
      }
      const auto& nc = std::get<NeedsConvexify>(choice);
      ConvexifyOutcome c1 = convexify4gon(d1, nc.task);
      ConvexifyOutcome c2 = convexify4gon(d2, nc.task);
      std::optional<VertexId> target;
      for (VertexId a : ringOf(c1.end, nc.p))
        if (canContract(c1.end, nc.p, a).ok &&
            canContract(c2.end, nc.p, a).ok) {
          target = a;
          break;
        }
      if (!target)
        throw Error(ErrorCode::TargetSelectionExhausted,
                    "vertex " + std::to_string(nc.p) +
                        " still has no common contraction target after "
                        "convexification");
      ContractResult r1 = contract(c1.end, nc.p, *target);
      ContractResult r2 = contract(c2.end, nc.p, *target);
      PseudoMorph inner = buildAlignedPair(r1.drawing, r2.drawing);
      PseudoMorph pm = c1.events;
      pm.events.emplace_back(NestedEvent{nc.p, *target, r1.record,
                                         std::move(inner), c2.end.at(nc.p)});
      appendEvents(pm, reverse(c2.events, d2));
      return pm;
    } catch (const Error& e) {
      reasons.push_back(e.what());
    }
  }
  std::ostringstream os;
  os << "every contraction candidate failed on a pair with "
     << d1.coords.size() << " vertices";
  for (std::size_t i = 0; i < reasons.size() && i < 6; ++i)
    os << "; " << reasons[i];
  if (cands.empty()) os << "; no candidates at all";
  throw Error(ErrorCode::TargetSelectionExhausted, os.str());
}

}  // namespace detail

// Pseudo-morph from the first drawing to the second.  Requires the drawings
// to be valid and topologically equivalent (same faces and same outer face).
// The result is self-certified: it replays to the second drawing exactly and
// passes verification before being returned.
inline PseudoMorph buildPseudoMorph(const Drawing& d1, const Drawing& d2) {
  if (!topologicallyEquivalent(d1, d2))
    throw Error(ErrorCode::TopologyMismatch,
                "drawings must share the same faces and the same outer face");
  for (const Drawing* d : {&d1, &d2}) {
    auto errs = validateDrawing(*d);
    if (!errs.empty())
      throw Error(ErrorCode::NotSimple,
                  "input drawing invalid: " + errs.front());
  }
  BoundaryAlignment align = normalizeBoundary(d1, d2);
  PseudoMorph pm = detail::buildAlignedPair(d1, align.aligned);
  for (LinearEvent& le : align.tail) pm.events.emplace_back(std::move(le));

  PseudoMorphReport rep = verifyPseudoMorph(pm, d1);
  if (!rep.certified)
    throw Error(ErrorCode::Unhandled,
                "internal: emitted pseudo-morph failed certification: " +
                    rep.problems.front());
  if (!coordsEqual(rep.final, d2))
    throw Error(ErrorCode::Unhandled,
                "internal: emitted pseudo-morph does not reach the target "
                "drawing");
  return pm;
}

}  // namespace unimorph
