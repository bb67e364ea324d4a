#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "unimorph/morph.hpp"
#include "unimorph/region.hpp"
#include "unimorph/verify.hpp"

namespace unimorph {

// ---------------------------------------------------------------------------
// Reinsertion machinery: turn a pseudo-morph into a true morph with exactly
// the same number of steps. Rings of size 3 and 4 use fixed convex
// combinations of ring vertices; rings of size 5 use the apex-sector / nice-
// set construction, all in exact rational arithmetic.
// ---------------------------------------------------------------------------

enum class SectorSign { Positive, Negative };

// The corner of the ring polygon's kernel at the apex vertex, stored as an
// inscribed triangle {apex, apex + t1*r1, apex + t2*r2} whose legs stay
// within `radius` of the apex. A Negative sector arises at a reflex apex and
// is bounded by the reflected edge directions.
struct Sector {
  Point apex;
  Rational radius;
  Wedge wedge;
  SectorSign sign = SectorSign::Positive;
  std::optional<std::pair<Point, Point>> reflected;  // (b', e') when Negative
  ConvexRegion region;
};

struct NiceSet {
  ConvexRegion region;
};

// Planned apex-relative positions of the returning vertex, one per keyframe;
// consecutive positions differ along the matching step direction.
struct ReinsertionPlan {
  std::vector<Point> positions;
  Rational epsilon;
  std::size_t retries = 0;
};

enum class Sidedness { OneSided, TwoSided };

// Re-express every keyframe in the frame where vertex a never moves. Each
// step keeps a parallel displacement set, so unidirectionality survives.
inline Morph relativeFrame(const Morph& m, VertexId a) {
  Morph out;
  out.tri = m.tri;
  out.notes = m.notes;
  if (m.keyframes.empty()) return out;
  Point anchor = m.keyframes.front().at(a);
  for (const CoordMap& kf : m.keyframes) {
    Vector shift = kf.at(a) - anchor;
    CoordMap rel;
    for (const auto& [v, p] : kf) rel.emplace(v, p - shift);
    out.keyframes.push_back(std::move(rel));
  }
  return out;
}

// Largest certified disk radius around the (fixed) apex that stays clear of
// every non-incident kernel constraint of the ring polygon, minimized over
// all keyframes and a dense grid of intermediate times.
inline Rational computeEpsilon(const Morph& m, const std::vector<VertexId>& ring,
                               std::size_t interiorSamples = 16) {
  if (m.keyframes.empty() || ring.size() < 3)
    throw Error(ErrorCode::Unhandled, "epsilon needs keyframes and a ring");
  const std::size_t k = ring.size();
  Point apex = m.keyframes.front().at(ring[0]);

  std::optional<Rational> minSq;
  auto inspect = [&](const std::vector<Point>& pos) {
    // pos[i] is ring[i]'s position; non-incident edges are (1,2)..(k-2,k-1).
    for (std::size_t i = 1; i + 1 < k; ++i) {
      Vector edge = pos[i + 1] - pos[i];
      Rational c = cross(edge, apex - pos[i]);
      if (c <= 0)
        throw Error(ErrorCode::NonPositive,
                    "apex lies on or beyond a non-incident kernel constraint");
      Rational dsq = (c * c) / squaredLength(edge);
      if (!minSq || dsq < *minSq) minSq = dsq;
    }
  };

  auto ringAt = [&](const CoordMap& kf) {
    std::vector<Point> pos;
    pos.reserve(k);
    for (VertexId v : ring) pos.push_back(kf.at(v));
    return pos;
  };

  for (const CoordMap& kf : m.keyframes) {
    if (kf.at(ring[0]) != apex)
      throw Error(ErrorCode::Unhandled, "apex must be frame-fixed");
    inspect(ringAt(kf));
  }
  for (std::size_t s = 0; s + 1 < m.keyframes.size(); ++s) {
    std::vector<Point> a = ringAt(m.keyframes[s]);
    std::vector<Point> b = ringAt(m.keyframes[s + 1]);
    for (std::size_t j = 1; j < interiorSamples; ++j) {
      Rational t(static_cast<long long>(j),
                 static_cast<long long>(interiorSamples));
      std::vector<Point> mid(k);
      for (std::size_t i = 0; i < k; ++i) mid[i] = a[i] + (b[i] - a[i]) * t;
      inspect(mid);
    }
  }

  Rational eps = sqrtLower(*minSq);
  if (eps <= 0) eps = *minSq / (1 + *minSq);  // still a valid under-estimate
  return eps;
}

// The kernel corner at the apex for one keyframe: Positive (bounded by the
// edges to the ring neighbours) at a convex apex, Negative (bounded by their
// reflections through the apex) at a reflex one.
inline Sector sectorAt(const CoordMap& kf, const std::vector<VertexId>& ring,
                       const Rational& eps) {
  if (eps <= 0)
    throw Error(ErrorCode::NonPositive, "sector radius must be positive");
  Point a = kf.at(ring[0]);
  Point b = kf.at(ring[1]);
  Point e = kf.at(ring.back());

  Sector s;
  s.apex = a;
  s.radius = eps;
  Orientation o = orientation(e, a, b);
  if (o == Orientation::Collinear)
    throw Error(ErrorCode::DegenerateWedge,
                "ring neighbours are collinear with the apex");
  Vector u = b - a, w = e - a;
  if (o == Orientation::CounterClockwise) {
    s.sign = SectorSign::Positive;
    s.wedge = Wedge{u, w};
  } else {
    s.sign = SectorSign::Negative;
    s.wedge = Wedge{-u, -w};
    s.reflected = std::make_pair(a + (a - b), a + (a - e));
  }
  Vector r1 = s.wedge.r1, r2 = s.wedge.r2;
  if (cross(r1, r2) < 0) std::swap(r1, r2);

  Rational e2 = eps * eps;
  auto leg = [&](const Vector& r) {
    Rational r2n = squaredLength(r);
    Rational tau = sqrtLower(e2 / r2n);
    if (tau <= 0) tau = e2 / (r2n + e2);
    return tau;
  };
  s.region =
      ConvexRegion::triangle(a, a + r1 * leg(r1), a + r2 * leg(r2), false);
  return s;
}

// Whether both wedge rays lie in one closed half-plane of the line through
// the apex along `dir`. (Reflecting both rays leaves the answer unchanged,
// so the ring neighbours and their reflections classify identically.)
inline Sidedness classifySided(const Sector& s, const Vector& dir) {
  if (dir.isZero())
    throw Error(ErrorCode::Unhandled, "sidedness needs a nonzero direction");
  int s1 = sign(cross(dir, s.wedge.r1));
  int s2 = sign(cross(dir, s.wedge.r2));
  return s1 * s2 >= 0 ? Sidedness::OneSided : Sidedness::TwoSided;
}

// Backward sweep of Lemma-style nice sets: the last one is the interior of
// the last sector; earlier ones are the sector interiors truncated to the
// slab of step-direction lines through the successor. A step with no
// direction (nothing moved) copies its successor.
inline std::vector<NiceSet> niceSets(
    const std::vector<Sector>& sectors,
    const std::vector<std::optional<Vector>>& directions) {
  if (sectors.empty() || sectors.size() != directions.size() + 1)
    throw Error(ErrorCode::Unhandled, "need k sectors and k-1 directions");
  std::vector<NiceSet> out(sectors.size());
  out.back().region = sectors.back().region.interior();
  if (out.back().region.isEmpty())
    throw Error(ErrorCode::EmptyNiceSet, "last sector has empty interior");
  for (std::size_t i = sectors.size() - 1; i-- > 0;) {
    if (!directions[i]) {
      out[i].region = out[i + 1].region;
    } else {
      SlabInterval slab = projectOntoNormal(out[i + 1].region, *directions[i]);
      out[i].region = truncate(sectors[i].region.interior(), slab);
    }
    if (out[i].region.isEmpty())
      throw Error(ErrorCode::EmptyNiceSet,
                  "nice set " + std::to_string(i) + " is empty");
  }
  return out;
}

// Thread one point through the nice sets: start at an interior representative
// and, for each step, slide parallel to the step direction to the midpoint of
// the chord cut from the next nice set.
inline ReinsertionPlan threadPoints(
    const std::vector<NiceSet>& nice,
    const std::vector<std::optional<Vector>>& directions,
    const Rational& eps) {
  if (nice.empty() || nice.size() != directions.size() + 1)
    throw Error(ErrorCode::Unhandled, "need k nice sets and k-1 directions");
  ReinsertionPlan plan;
  plan.epsilon = eps;
  auto rep = nice.front().region.representative();
  if (!rep)
    throw Error(ErrorCode::EmptyNiceSet, "first nice set has no interior point");
  plan.positions.push_back(*rep);
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Point& cur = plan.positions.back();
    if (!directions[i]) {
      plan.positions.push_back(cur);
      continue;
    }
    LineClip clip = nice[i + 1].region.clipLine(cur, *directions[i]);
    if (clip.empty)
      throw Error(ErrorCode::NoIntersection,
                  "direction line misses nice set " + std::to_string(i + 1));
    Rational mid = (clip.lo + clip.hi) / 2;
    plan.positions.push_back(cur + *directions[i] * mid);
  }
  return plan;
}

// Telemetry of one 5-ring reinsertion, kept for audit.
struct FiveGonRecord {
  VertexId p = 0, a = 0;
  std::vector<Sector> sectors;
  std::vector<NiceSet> nice;
  ReinsertionPlan plan;
};

struct ConvertOptions {
  std::size_t maxRetries = 64;
  std::size_t epsilonSamples = 16;
};

namespace detail {

// Absolute positions of the returning vertex across keyframes, one entry per
// keyframe of m.
using Track = std::vector<Point>;

inline Morph withTrack(const Morph& m, const Triangulation& fullTri,
                       VertexId p, const Track& track) {
  Morph out;
  out.tri = fullTri;
  out.notes = m.notes;
  out.keyframes = m.keyframes;
  for (std::size_t i = 0; i < out.keyframes.size(); ++i)
    out.keyframes[i].emplace(p, track[i]);
  return out;
}

inline Track smallRingTrack(const Morph& m, const ContractionRecord& rec) {
  Track track;
  track.reserve(m.keyframes.size());
  for (const CoordMap& kf : m.keyframes) {
    if (rec.ring.size() == 3) {
      Point s0 = kf.at(rec.ring[0]), s1 = kf.at(rec.ring[1]),
            s2 = kf.at(rec.ring[2]);
      track.push_back(fromBarycentric({Rational(1, 2), Rational(1, 4),
                                       Rational(1, 4)},
                                      s0, s1, s2));
    } else {
      Point s0 = kf.at(rec.ring[0]), s2 = kf.at(rec.ring[2]);
      track.push_back(Point{(s0.x + s2.x) / 2, (s0.y + s2.y) / 2});
    }
  }
  return track;
}

// All ring faces (p, s_j, s_{j+1}) strictly positive for the whole step.
inline bool ringFacesSafe(const CoordMap& from, const CoordMap& to,
                          const std::vector<VertexId>& ring,
                          const Point& pFrom, const Point& pTo) {
  const std::size_t k = ring.size();
  for (std::size_t j = 0; j < k; ++j) {
    VertexId sj = ring[j], sj1 = ring[(j + 1) % k];
    QuadraticPoly q = areaQuadratic(pFrom, pTo, from.at(sj), to.at(sj),
                                    from.at(sj1), to.at(sj1));
    if (!strictlyPositiveOn01(q).positive) return false;
  }
  return true;
}

inline std::vector<std::optional<Vector>> stepDirections(const Morph& rel) {
  std::vector<std::optional<Vector>> dirs;
  for (std::size_t i = 0; i + 1 < rel.keyframes.size(); ++i) {
    DirectionResult r = directionOf(rel.keyframes[i], rel.keyframes[i + 1]);
    if (std::holds_alternative<NotUnidirectional>(r))
      throw Error(ErrorCode::ReinsertionFailure,
                  "inner morph step is not unidirectional");
    if (std::holds_alternative<Direction>(r))
      dirs.push_back(std::get<Direction>(r).dir);
    else
      dirs.push_back(std::nullopt);
  }
  return dirs;
}

}  // namespace detail

// Add the contracted vertex back into every keyframe of a morph over the
// reduced drawing, ring size 3 or 4: a fixed convex combination of ring
// vertices (weights (1/2, 1/4, 1/4) toward the target, or the midpoint of
// the drawn diagonal), which commutes with linear interpolation and so
// preserves both unidirectionality and face positivity for free.
inline Morph reinsertSmall(const Morph& m, const Triangulation& fullTri,
                           const ContractionRecord& rec) {
  if (rec.ring.size() != 3 && rec.ring.size() != 4)
    throw Error(ErrorCode::Unhandled, "reinsertSmall wants a ring of 3 or 4");
  return detail::withTrack(m, fullTri, rec.p,
                           detail::smallRingTrack(m, rec));
}

// Ring of five: apex sectors at every keyframe, nice sets swept backward,
// threading forward, then an exact safety check of every ring face; on
// failure the radius is halved and the construction repeated.
inline Morph reinsertFive(const Morph& m, const Triangulation& fullTri,
                          const ContractionRecord& rec,
                          const ConvertOptions& opts = {},
                          FiveGonRecord* telemetry = nullptr) {
  if (rec.ring.size() != 5)
    throw Error(ErrorCode::Unhandled, "reinsertFive wants a ring of 5");
  const VertexId a = rec.ring[0];
  Morph rel = relativeFrame(m, a);
  std::vector<std::optional<Vector>> dirs = detail::stepDirections(rel);
  Rational eps = computeEpsilon(rel, rec.ring, opts.epsilonSamples);
  Point anchor = m.keyframes.front().at(a);

  for (std::size_t attempt = 0; attempt <= opts.maxRetries; ++attempt) {
    std::vector<Sector> sectors;
    sectors.reserve(rel.keyframes.size());
    for (const CoordMap& kf : rel.keyframes)
      sectors.push_back(sectorAt(kf, rec.ring, eps));
    std::vector<NiceSet> nice = niceSets(sectors, dirs);
    ReinsertionPlan plan = threadPoints(nice, dirs, eps);
    plan.retries = attempt;

    detail::Track track;
    track.reserve(m.keyframes.size());
    for (std::size_t i = 0; i < m.keyframes.size(); ++i)
      track.push_back(plan.positions[i] + (m.keyframes[i].at(a) - anchor));

    bool safe = true;
    for (std::size_t i = 0; safe && i + 1 < m.keyframes.size(); ++i)
      safe = detail::ringFacesSafe(m.keyframes[i], m.keyframes[i + 1],
                                   rec.ring, track[i], track[i + 1]);
    if (safe) {
      if (telemetry) {
        telemetry->a = a;
        telemetry->p = rec.p;
        telemetry->sectors = std::move(sectors);
        telemetry->nice = std::move(nice);
        telemetry->plan = plan;
      }
      return detail::withTrack(m, fullTri, rec.p, track);
    }
    eps /= 2;
  }
  throw Error(ErrorCode::ReinsertionFailure,
              "ring-face safety not reached within retry budget");
}

struct ConvertResult {
  Morph morph;
  std::vector<FiveGonRecord> fiveGons;
};

namespace detail {

inline Drawing convertEvents(const PseudoMorph& pm, const Drawing& start,
                             const ConvertOptions& opts, Morph& morph,
                             std::vector<FiveGonRecord>& fives);

}  // namespace detail

// Convert a certified pseudo-morph into a true morph with exactly the same
// number of steps: each linear event is one step; each contraction pair
// becomes one placement step, the inner steps with the vertex riding along,
// and one return step.
inline ConvertResult convertDetailed(const PseudoMorph& pm,
                                     const Drawing& start,
                                     const ConvertOptions& opts = {}) {
  ConvertResult out;
  out.morph.tri = start.tri;
  out.morph.keyframes.push_back(start.coords);
  detail::convertEvents(pm, start, opts, out.morph, out.fiveGons);
  return out;
}

inline Morph convert(const PseudoMorph& pm, const Drawing& start,
                     const ConvertOptions& opts = {}) {
  return convertDetailed(pm, start, opts).morph;
}

namespace detail {

inline Drawing convertEvents(const PseudoMorph& pm, const Drawing& start,
                             const ConvertOptions& opts, Morph& morph,
                             std::vector<FiveGonRecord>& fives) {
  Drawing cur = start;
  for (const Event& e : pm.events) {
    if (std::holds_alternative<LinearEvent>(e)) {
      cur = applyEvent(cur, e);
      morph.keyframes.push_back(cur.coords);
      morph.notes.push_back("move");
      continue;
    }
    const NestedEvent& ne = std::get<NestedEvent>(e);
    ContractResult r = contract(cur, ne.p, ne.a);
    if (r.record.ring != ne.record.ring)
      throw Error(ErrorCode::TopologyMismatch,
                  "stored contraction ring does not match the drawing");

    ConvertResult inner = convertDetailed(ne.inner, r.drawing, opts);
    for (FiveGonRecord& f : inner.fiveGons) fives.push_back(std::move(f));

    Morph augmented;
    if (ne.record.ring.size() == 5) {
      FiveGonRecord rec;
      augmented = reinsertFive(inner.morph, cur.tri, ne.record, opts, &rec);
      fives.push_back(std::move(rec));
    } else {
      augmented = reinsertSmall(inner.morph, cur.tri, ne.record);
    }

    std::string tag = std::to_string(ne.p);
    morph.keyframes.push_back(augmented.keyframes.front());
    morph.notes.push_back("place " + tag);
    for (std::size_t i = 1; i < augmented.keyframes.size(); ++i) {
      morph.keyframes.push_back(augmented.keyframes[i]);
      morph.notes.push_back("carry " + tag);
    }

    Drawing innerEnd{r.drawing.tri, inner.morph.keyframes.back()};
    cur = uncontract(innerEnd, ne.record, ne.reentry);
    morph.keyframes.push_back(cur.coords);
    morph.notes.push_back("return " + tag);
  }
  return cur;
}

}  // namespace detail

}  // namespace unimorph
