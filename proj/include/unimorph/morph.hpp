#pragma once

#include <string>
#include <variant>
#include <vector>

#include "unimorph/triangulation.hpp"

namespace unimorph {

using CoordMap = std::map<VertexId, Point>;

// A morph is a keyframe sequence over one triangulation; step i interpolates
// keyframe i to keyframe i+1 linearly. Notes, when present, label each step.
struct Morph {
  Triangulation tri;
  std::vector<CoordMap> keyframes;
  std::vector<std::string> notes;

  std::size_t steps() const {
    return keyframes.empty() ? 0 : keyframes.size() - 1;
  }
};

inline Morph reverse(const Morph& m) {
  Morph out;
  out.tri = m.tri;
  out.keyframes.assign(m.keyframes.rbegin(), m.keyframes.rend());
  out.notes.assign(m.notes.rbegin(), m.notes.rend());
  return out;
}

// No vertex moved at all.
struct AnyDirection {};
// Every displacement is parallel to this (nonzero) vector.
struct Direction {
  Vector dir;
};
// Two vertices whose displacements are not parallel.
struct NotUnidirectional {
  VertexId u, v;
};
using DirectionResult = std::variant<AnyDirection, Direction, NotUnidirectional>;

inline bool isUnidirectional(const DirectionResult& r) {
  return !std::holds_alternative<NotUnidirectional>(r);
}

inline DirectionResult directionOf(const CoordMap& from, const CoordMap& to) {
  if (from.size() != to.size())
    throw Error(ErrorCode::TopologyMismatch,
                "keyframes cover different vertex sets");
  std::optional<VertexId> mover;
  Vector dir{0, 0};
  for (const auto& [v, p] : from) {
    auto it = to.find(v);
    if (it == to.end())
      throw Error(ErrorCode::TopologyMismatch,
                  "keyframes cover different vertex sets");
    Vector d = it->second - p;
    if (d.isZero()) continue;
    if (!mover) {
      mover = v;
      dir = d;
    } else if (!parallel(dir, d)) {
      return NotUnidirectional{*mover, v};
    }
  }
  if (!mover) return AnyDirection{};
  return Direction{dir};
}

inline DirectionResult directionOf(const Drawing& from, const Drawing& to) {
  if (!topologicallyEquivalent(from, to))
    throw Error(ErrorCode::TopologyMismatch,
                "drawings differ combinatorially");
  return directionOf(from.coords, to.coords);
}

// One straight-line move of any subset of vertices to explicit targets.
struct LinearEvent {
  CoordMap target;
};

struct Event;

// A pseudo-morph interleaves linear moves with contraction/uncontraction
// pairs; each pair wraps an inner pseudo-morph on the reduced drawing.
struct PseudoMorph {
  std::vector<Event> events;
};

struct NestedEvent {
  VertexId p = 0, a = 0;
  ContractionRecord record;
  PseudoMorph inner;
  Point reentry;  // where p comes back when the inner morph has finished
};

struct Event : std::variant<LinearEvent, NestedEvent> {
  using std::variant<LinearEvent, NestedEvent>::variant;
};

struct StepCount {
  std::size_t linear = 0, contractions = 0, uncontractions = 0;

  std::size_t total() const { return linear + contractions + uncontractions; }
  bool operator==(const StepCount& o) const {
    return linear == o.linear && contractions == o.contractions &&
           uncontractions == o.uncontractions;
  }
};

inline StepCount countSteps(const PseudoMorph& pm) {
  StepCount c;
  for (const Event& e : pm.events) {
    if (std::holds_alternative<LinearEvent>(e)) {
      ++c.linear;
    } else {
      const NestedEvent& ne = std::get<NestedEvent>(e);
      StepCount inner = countSteps(ne.inner);
      c.linear += inner.linear;
      c.contractions += inner.contractions + 1;
      c.uncontractions += inner.uncontractions + 1;
    }
  }
  return c;
}

// Apply one event (or a whole pseudo-morph) to a drawing. Structure checks
// throw; geometric validity is the verifier's business.
inline Drawing applyPseudoMorph(const Drawing& d, const PseudoMorph& pm);

inline Drawing applyEvent(const Drawing& d, const Event& e) {
  if (std::holds_alternative<LinearEvent>(e)) {
    const CoordMap& target = std::get<LinearEvent>(e).target;
    if (target.size() != d.coords.size())
      throw Error(ErrorCode::TopologyMismatch,
                  "linear event targets a different vertex set");
    for (const auto& [v, _] : target)
      if (!d.coords.count(v))
        throw Error(ErrorCode::TopologyMismatch,
                    "linear event targets a different vertex set");
    Drawing out;
    out.tri = d.tri;
    out.coords = target;
    return out;
  }
  const NestedEvent& ne = std::get<NestedEvent>(e);
  ContractResult r = contract(d, ne.p, ne.a);
  if (r.record.ring != ne.record.ring)
    throw Error(ErrorCode::TopologyMismatch,
                "stored contraction ring does not match the drawing");
  Drawing innerEnd = applyPseudoMorph(r.drawing, ne.inner);
  return uncontract(innerEnd, ne.record, ne.reentry);
}

inline Drawing applyPseudoMorph(const Drawing& d, const PseudoMorph& pm) {
  Drawing cur = d;
  for (const Event& e : pm.events) cur = applyEvent(cur, e);
  return cur;
}

// Reverse a pseudo-morph anchored at its start drawing (targets are absolute,
// so replay is needed). Contraction and uncontraction roles swap.
inline PseudoMorph reverse(const PseudoMorph& pm, const Drawing& start) {
  std::vector<Drawing> before;
  before.push_back(start);
  for (const Event& e : pm.events)
    before.push_back(applyEvent(before.back(), e));

  PseudoMorph out;
  for (std::size_t i = pm.events.size(); i-- > 0;) {
    const Event& e = pm.events[i];
    if (std::holds_alternative<LinearEvent>(e)) {
      out.events.push_back(LinearEvent{before[i].coords});
      continue;
    }
    const NestedEvent& ne = std::get<NestedEvent>(e);
    ContractResult r = contract(before[i], ne.p, ne.a);
    NestedEvent rev;
    rev.p = ne.p;
    rev.a = ne.a;
    rev.record = ne.record;
    rev.record.positionAtContraction = ne.reentry;
    rev.inner = reverse(ne.inner, r.drawing);
    rev.reentry = before[i].at(ne.p);
    out.events.push_back(Event{std::move(rev)});
  }
  return out;
}

inline bool operator==(const Event& a, const Event& b);

inline bool operator==(const PseudoMorph& a, const PseudoMorph& b) {
  return a.events == b.events;
}

inline bool operator==(const LinearEvent& a, const LinearEvent& b) {
  return a.target == b.target;
}

inline bool operator==(const NestedEvent& a, const NestedEvent& b) {
  return a.p == b.p && a.a == b.a && a.record.ring == b.record.ring &&
         a.record.positionAtContraction == b.record.positionAtContraction &&
         a.reentry == b.reentry && a.inner == b.inner;
}

inline bool operator==(const Event& a, const Event& b) {
  return static_cast<const std::variant<LinearEvent, NestedEvent>&>(a) ==
         static_cast<const std::variant<LinearEvent, NestedEvent>&>(b);
}

}  // namespace unimorph
