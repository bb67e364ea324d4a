#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unimorph/morph.hpp"
#include "unimorph/region.hpp"

namespace unimorph {

// ---------------------------------------------------------------------------
// Certification of a single linear step.
//
// A step is certified when (a) every displacement is parallel to one common
// line and (b) every face of the drawing -- the outer triangle included --
// keeps strictly positive signed area for the whole of t in [0,1]. Together
// these guarantee the interpolated drawing is a valid plane drawing at every
// intermediate time, not merely at the sampled ones.
// ---------------------------------------------------------------------------

struct FaceFailure {
  bool outer = false;
  std::array<VertexId, 3> face{};
  Positivity positivity;  // non-positive verdict, with its witness time
};

struct StepReport {
  bool certified = false;
  DirectionResult direction;
  std::optional<FaceFailure> faceFailure;
  std::vector<std::string> reasons;
};

namespace detail {

inline QuadraticPoly faceAreaQuad(const Drawing& from, const Drawing& to,
                                  VertexId a, VertexId b, VertexId c) {
  return areaQuadratic(from.at(a), to.at(a), from.at(b), to.at(b), from.at(c),
                       to.at(c));
}

inline std::string describeTime(const Positivity& p) {
  std::ostringstream os;
  if (p.witnessRational)
    os << "t = " << ratToString(*p.witnessRational);
  else
    os << "t in [" << ratToString(p.witnessLo) << ", "
       << ratToString(p.witnessHi) << "]";
  return os.str();
}

// Check every face (outer triangle first, then internal faces in trace
// order); report the failure with the smallest witness time.
inline std::optional<FaceFailure> earliestFaceFailure(const Drawing& from,
                                                      const Drawing& to) {
  std::optional<FaceFailure> best;
  auto consider = [&](bool outer, const std::array<VertexId, 3>& f) {
    QuadraticPoly q = faceAreaQuad(from, to, f[0], f[1], f[2]);
    Positivity res = strictlyPositiveOn01(q);
    if (res.positive) return;
    if (!best || res.witnessLo < best->positivity.witnessLo)
      best = FaceFailure{outer, f, res};
  };
  const auto& b = from.tri.boundary;
  consider(true, {b[0], b[1], b[2]});
  for (const auto& f : internalFaces(from.tri)) consider(false, f);
  return best;
}

}  // namespace detail

inline StepReport verifyStep(const Drawing& from, const Drawing& to) {
  if (!topologicallyEquivalent(from, to))
    throw Error(ErrorCode::TopologyMismatch,
                "step endpoints differ combinatorially");
  for (const Drawing* d : {&from, &to}) {
    auto errs = validateDrawing(*d);
    if (!errs.empty())
      throw Error(ErrorCode::InvalidEndpoint,
                  "step endpoint is not a valid drawing: " + errs.front());
  }

  StepReport rep;
  rep.direction = directionOf(from.coords, to.coords);
  if (!isUnidirectional(rep.direction)) {
    const auto& w = std::get<NotUnidirectional>(rep.direction);
    std::ostringstream os;
    os << "displacements of vertices " << w.u << " and " << w.v
       << " are not parallel";
    rep.reasons.push_back(os.str());
  }

  rep.faceFailure = detail::earliestFaceFailure(from, to);
  if (rep.faceFailure) {
    const FaceFailure& ff = *rep.faceFailure;
    std::ostringstream os;
    os << (ff.outer ? "outer triangle (" : "face (") << ff.face[0] << ", "
       << ff.face[1] << ", " << ff.face[2]
       << ") loses strictly positive area at "
       << detail::describeTime(ff.positivity);
    rep.reasons.push_back(os.str());
  }

  rep.certified = rep.reasons.empty();
  return rep;
}

struct MorphReport {
  bool certified = false;
  std::vector<StepReport> steps;
  std::vector<std::string> reasons;
};

inline MorphReport verifyMorph(const Morph& m) {
  MorphReport rep;
  if (m.keyframes.empty()) {
    rep.reasons.push_back("morph has no keyframes");
    return rep;
  }
  for (std::size_t i = 0; i < m.keyframes.size(); ++i) {
    Drawing d{m.tri, m.keyframes[i]};
    auto errs = validateDrawing(d);
    if (!errs.empty())
      throw Error(ErrorCode::InvalidEndpoint,
                  "keyframe " + std::to_string(i) +
                      " is not a valid drawing: " + errs.front());
  }
  rep.certified = true;
  for (std::size_t i = 0; i + 1 < m.keyframes.size(); ++i) {
    StepReport sr =
        verifyStep(Drawing{m.tri, m.keyframes[i]}, Drawing{m.tri, m.keyframes[i + 1]});
    if (!sr.certified) {
      rep.certified = false;
      for (const std::string& r : sr.reasons)
        rep.reasons.push_back("step " + std::to_string(i) + ": " + r);
    }
    rep.steps.push_back(std::move(sr));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certification of a pseudo-morph: walk the event tree, certify each linear
// move, and check every contraction/uncontraction against the drawing it
// actually meets during replay.
// ---------------------------------------------------------------------------

struct PseudoMorphReport {
  bool certified = false;
  StepCount counts;
  std::vector<std::string> problems;
  Drawing final;  // drawing after replaying every event that was reached
};

namespace detail {

inline void verifyEvents(const PseudoMorph& pm, Drawing& cur,
                         const std::string& prefix,
                         std::vector<std::string>& problems) {
  for (std::size_t i = 0; i < pm.events.size(); ++i) {
    std::string tag = prefix + "event " + std::to_string(i);
    const Event& e = pm.events[i];
    if (std::holds_alternative<LinearEvent>(e)) {
      Drawing to;
      to.tri = cur.tri;
      to.coords = std::get<LinearEvent>(e).target;
      auto errs = validateDrawing(to);
      if (!errs.empty()) {
        problems.push_back(tag + ": target drawing invalid: " + errs.front());
        return;
      }
      StepReport sr = verifyStep(cur, to);
      for (const std::string& r : sr.reasons)
        problems.push_back(tag + ": " + r);
      cur = std::move(to);
      continue;
    }
    const NestedEvent& ne = std::get<NestedEvent>(e);
    ContractCheck chk = canContract(cur, ne.p, ne.a);
    if (!chk.ok) {
      problems.push_back(tag + ": contraction of " + std::to_string(ne.p) +
                         " onto " + std::to_string(ne.a) +
                         " is not admissible: " + chk.detail);
      return;
    }
    ContractResult r = contract(cur, ne.p, ne.a);
    if (r.record.ring != ne.record.ring) {
      problems.push_back(tag + ": stored ring does not match the drawing");
      return;
    }
    Drawing inner = r.drawing;
    verifyEvents(ne.inner, inner, tag + " / inner ", problems);
    try {
      cur = uncontract(inner, ne.record, ne.reentry);
    } catch (const Error& err) {
      problems.push_back(tag + ": reinsertion of " + std::to_string(ne.p) +
                         " rejected: " + err.what());
      return;
    }
  }
}

}  // namespace detail

inline PseudoMorphReport verifyPseudoMorph(const PseudoMorph& pm,
                                           const Drawing& start) {
  auto errs = validateDrawing(start);
  if (!errs.empty())
    throw Error(ErrorCode::InvalidEndpoint,
                "start drawing invalid: " + errs.front());
  PseudoMorphReport rep;
  rep.counts = countSteps(pm);
  Drawing cur = start;
  detail::verifyEvents(pm, cur, "", rep.problems);
  rep.final = std::move(cur);
  rep.certified = rep.problems.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Sampled oracle: evaluate the interpolated drawing on the uniform grid
// t = j/samples for j = 0..samples and look for any concrete planarity
// violation -- a non-positive face, coincident vertices, crossing edges, or
// a vertex sitting on an edge. Slower and strictly weaker than verifyStep
// (it can miss violations between grid points) but entirely independent of
// the certification path, which is what makes it useful as a cross-check.
// ---------------------------------------------------------------------------

struct OracleViolation {
  std::size_t sampleIndex = 0;
  Rational time;
  std::string what;
};

namespace detail {

struct IntQuad {
  BigInt a2, a1, a0;
};

inline IntQuad scaleToInt(const QuadraticPoly& q) {
  BigInt d2 = denominator(q.a2), d1 = denominator(q.a1), d0 = denominator(q.a0);
  BigInt l = lcm(lcm(d2, d1), d0);
  auto scl = [&](const Rational& x) {
    return numerator(x) * (l / denominator(x));
  };
  return IntQuad{scl(q.a2), scl(q.a1), scl(q.a0)};
}

// Incremental evaluation of P(j) = a2 j^2 + a1 j N + a0 N^2, whose sign at
// integer j equals the sign of the rational quadratic at t = j/N.
class GridScan {
 public:
  GridScan(const QuadraticPoly& q, const BigInt& n) {
    IntQuad iq = scaleToInt(q);
    twoA2_ = iq.a2 * 2;
    val_ = iq.a0 * n * n;
    delta_ = iq.a2 + iq.a1 * n;
  }
  const BigInt& value() const { return val_; }
  void advance() {
    val_ += delta_;
    delta_ += twoA2_;
  }

 private:
  BigInt twoA2_, val_, delta_;
};

// -1, 0, +1: strict sign of q over the whole interval, or 0 when it varies
// (or touches zero).
inline int signOn01(const QuadraticPoly& q) {
  if (strictlyPositiveOn01(q).positive) return 1;
  if (strictlyPositiveOn01(QuadraticPoly{-q.a2, -q.a1, -q.a0}).positive)
    return -1;
  return 0;
}

}  // namespace detail

inline std::optional<OracleViolation> sampleOracle(const Drawing& from,
                                                   const Drawing& to,
                                                   std::size_t samples) {
  if (!topologicallyEquivalent(from, to))
    throw Error(ErrorCode::TopologyMismatch,
                "oracle endpoints differ combinatorially");
  if (samples == 0)
    throw Error(ErrorCode::ParseError, "oracle needs at least one sample");
  const BigInt n = samples;
  const std::size_t last = samples;

  std::size_t bestJ = last + 1;
  int bestRank = 99;
  std::string bestWhat;

  auto record = [&](std::size_t j, int rank, const std::string& what) {
    if (j < bestJ || (j == bestJ && rank < bestRank)) {
      bestJ = j;
      bestRank = rank;
      bestWhat = what;
    }
  };

  auto posAt = [&](VertexId v, std::size_t j) {
    Rational t(static_cast<long long>(j), static_cast<long long>(samples));
    const Point& p = from.at(v);
    return p + (to.at(v) - p) * t;
  };

  // Category 0: face areas. A certificate of strict positivity on [0,1]
  // covers every grid point, so only undecided faces are scanned.
  auto scanFace = [&](bool outer, const std::array<VertexId, 3>& f) {
    QuadraticPoly q = detail::faceAreaQuad(from, to, f[0], f[1], f[2]);
    if (strictlyPositiveOn01(q).positive) return;
    detail::GridScan scan(q, n);
    for (std::size_t j = 0; j <= last && j < bestJ; ++j, scan.advance()) {
      if (scan.value() <= 0) {
        std::ostringstream os;
        os << (outer ? "outer triangle (" : "face (") << f[0] << ", " << f[1]
           << ", " << f[2] << ") has non-positive area";
        record(j, 0, os.str());
        return;
      }
    }
  };
  {
    const auto& b = from.tri.boundary;
    scanFace(true, {b[0], b[1], b[2]});
    for (const auto& f : internalFaces(from.tri)) scanFace(false, f);
  }

  // Category 1: coincident vertices. Coincidence times solve two linear
  // equations exactly, so only grid-aligned solutions are reported.
  std::vector<VertexId> ids = from.tri.vertexIds();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t k = i + 1; k < ids.size(); ++k) {
      VertexId u = ids[i], v = ids[k];
      Vector d0 = from.at(u) - from.at(v);
      Vector dd = (to.at(u) - from.at(u)) - (to.at(v) - from.at(v));
      std::optional<Rational> t;  // unique candidate, if any
      bool always = false;
      auto component = [&](const Rational& c0, const Rational& cd) -> bool {
        // returns false when this component can never vanish jointly
        if (cd == 0) return c0 == 0;  // vanishes for all t or never
        Rational root = -c0 / cd;
        if (t && *t != root) return false;
        t = root;
        return true;
      };
      bool feasible = component(d0.dx, dd.dx) && component(d0.dy, dd.dy);
      if (!feasible) continue;
      if (!t) always = true;
      if (always) {
        record(0, 1,
               "vertices " + std::to_string(u) + " and " + std::to_string(v) +
                   " coincide");
        continue;
      }
      if (*t < 0 || *t > 1) continue;
      Rational scaled = *t * Rational(n);
      if (denominator(scaled) != 1) continue;
      std::size_t j = static_cast<std::size_t>(numerator(scaled));
      record(j, 1,
             "vertices " + std::to_string(u) + " and " + std::to_string(v) +
                 " coincide");
    }
  }

  // Collect undirected edges once.
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& [u, nbrs] : from.tri.rotation)
    for (VertexId v : nbrs)
      if (u < v) edges.emplace_back(u, v);

  // Category 2: crossings between edges with no shared endpoint. The four
  // orientation quadratics give a cheap straddle filter; candidate grid
  // points are confirmed with the exact segment test.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t k = i + 1; k < edges.size(); ++k) {
      auto [a, b] = edges[i];
      auto [c, d] = edges[k];
      if (a == c || a == d || b == c || b == d) continue;
      QuadraticPoly q1 = detail::faceAreaQuad(from, to, a, b, c);
      QuadraticPoly q2 = detail::faceAreaQuad(from, to, a, b, d);
      int s1 = detail::signOn01(q1), s2 = detail::signOn01(q2);
      if (s1 != 0 && s1 == s2) continue;
      QuadraticPoly q3 = detail::faceAreaQuad(from, to, c, d, a);
      QuadraticPoly q4 = detail::faceAreaQuad(from, to, c, d, b);
      int s3 = detail::signOn01(q3), s4 = detail::signOn01(q4);
      if (s3 != 0 && s3 == s4) continue;
      detail::GridScan g1(q1, n), g2(q2, n), g3(q3, n), g4(q4, n);
      for (std::size_t j = 0; j <= last && j < bestJ;
           ++j, g1.advance(), g2.advance(), g3.advance(), g4.advance()) {
        int t1 = sign(g1.value()), t2 = sign(g2.value());
        if (t1 * t2 > 0) continue;
        int t3 = sign(g3.value()), t4 = sign(g4.value());
        if (t3 * t4 > 0) continue;
        if (segmentsIntersect(posAt(a, j), posAt(b, j), posAt(c, j),
                              posAt(d, j))) {
          std::ostringstream os;
          os << "edges (" << a << ", " << b << ") and (" << c << ", " << d
             << ") intersect";
          record(j, 2, os.str());
          break;
        }
      }
    }
  }

  // Category 3: a vertex lying on an edge it does not bound. This also
  // covers overlap between edges that share an endpoint.
  for (VertexId w : ids) {
    for (const auto& [u, v] : edges) {
      if (w == u || w == v) continue;
      QuadraticPoly q = detail::faceAreaQuad(from, to, u, v, w);
      if (detail::signOn01(q) != 0) continue;
      detail::GridScan scan(q, n);
      for (std::size_t j = 0; j <= last && j < bestJ; ++j, scan.advance()) {
        if (scan.value() != 0) continue;
        Point pw = posAt(w, j), pu = posAt(u, j), pv = posAt(v, j);
        if (pw == pu || pw == pv) continue;  // that is a coincidence event
        if (collinearPointOnSegment(pw, pu, pv)) {
          std::ostringstream os;
          os << "vertex " << w << " lies on edge (" << u << ", " << v << ")";
          record(j, 3, os.str());
          break;
        }
      }
    }
  }

  if (bestJ > last) return std::nullopt;
  OracleViolation out;
  out.sampleIndex = bestJ;
  out.time = Rational(static_cast<long long>(bestJ),
                      static_cast<long long>(samples));
  out.what = bestWhat;
  return out;
}

}  // namespace unimorph
