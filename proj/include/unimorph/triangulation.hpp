#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unimorph/region.hpp"

namespace unimorph {

using VertexId = std::uint32_t;

// Combinatorial planar triangulation: per-vertex counterclockwise neighbor
// order plus the outer triangle listed counterclockwise as drawn. Faces are
// implied: after the directed edge u -> v comes v -> w, where w immediately
// precedes u in the rotation of v. Internal faces then read counterclockwise
// and the outer face clockwise.
struct Triangulation {
  std::map<VertexId, std::vector<VertexId>> rotation;
  std::array<VertexId, 3> boundary{};

  bool hasVertex(VertexId v) const { return rotation.count(v) != 0; }

  std::size_t degree(VertexId v) const { return rotation.at(v).size(); }

  bool hasEdge(VertexId u, VertexId v) const {
    auto it = rotation.find(u);
    if (it == rotation.end()) return false;
    return std::find(it->second.begin(), it->second.end(), v) !=
           it->second.end();
  }

  bool isBoundary(VertexId v) const {
    return v == boundary[0] || v == boundary[1] || v == boundary[2];
  }

  std::vector<VertexId> vertexIds() const {
    std::vector<VertexId> ids;
    ids.reserve(rotation.size());
    for (const auto& [v, _] : rotation) ids.push_back(v);
    return ids;
  }

  std::size_t vertexCount() const { return rotation.size(); }

  std::size_t edgeCount() const {
    std::size_t twice = 0;
    for (const auto& [_, nbrs] : rotation) twice += nbrs.size();
    return twice / 2;
  }

  // Vertex tracing the face after u -> v.
  VertexId nextInFace(VertexId u, VertexId v) const {
    const std::vector<VertexId>& rot = rotation.at(v);
    auto it = std::find(rot.begin(), rot.end(), u);
    if (it == rot.end())
      throw Error(ErrorCode::Unhandled, "nextInFace on a missing edge");
    return it == rot.begin() ? rot.back() : *(it - 1);
  }
};

inline bool cyclicallyEqual(const std::vector<VertexId>& a,
                            const std::vector<VertexId>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t shift = 0; shift < b.size(); ++shift) {
    bool match = true;
    for (std::size_t i = 0; i < a.size() && match; ++i)
      match = a[i] == b[(i + shift) % b.size()];
    if (match) return true;
  }
  return false;
}

// All faces as directed-edge cycles; every directed edge lies on exactly one.
inline std::vector<std::vector<VertexId>> traceAllFaces(const Triangulation& t) {
  std::map<std::pair<VertexId, VertexId>, bool> seen;
  std::vector<std::vector<VertexId>> faces;
  for (const auto& [u, nbrs] : t.rotation) {
    for (VertexId v : nbrs) {
      if (seen.count({u, v})) continue;
      std::vector<VertexId> cycle;
      VertexId cu = u, cv = v;
      do {
        cycle.push_back(cu);
        seen[{cu, cv}] = true;
        VertexId cw = t.nextInFace(cu, cv);
        cu = cv;
        cv = cw;
        if (cycle.size() > 2 * t.rotation.size() + 4)
          throw Error(ErrorCode::Unhandled, "face trace does not close");
      } while (!(cu == u && cv == v));
      faces.push_back(std::move(cycle));
    }
  }
  return faces;
}

inline std::vector<VertexId> outerFaceCycle(const Triangulation& t) {
  return {t.boundary[0], t.boundary[2], t.boundary[1]};
}

// Internal faces as counterclockwise triples, deterministic order.
inline std::vector<std::array<VertexId, 3>> internalFaces(
    const Triangulation& t) {
  std::vector<std::array<VertexId, 3>> out;
  std::vector<VertexId> outer = outerFaceCycle(t);
  for (const std::vector<VertexId>& f : traceAllFaces(t)) {
    if (cyclicallyEqual(f, outer)) continue;
    if (f.size() != 3)
      throw Error(ErrorCode::Unhandled, "non-triangular internal face");
    out.push_back({f[0], f[1], f[2]});
  }
  return out;
}

inline std::vector<std::string> validateTriangulation(const Triangulation& t) {
  std::vector<std::string> bad;
  auto complain = [&](const std::string& s) { bad.push_back(s); };

  if (t.rotation.size() < 3) {
    complain("fewer than three vertices");
    return bad;
  }
  for (VertexId b : t.boundary)
    if (!t.hasVertex(b)) complain("boundary vertex " + std::to_string(b) +
                                  " missing from rotation system");
  if (t.boundary[0] == t.boundary[1] || t.boundary[1] == t.boundary[2] ||
      t.boundary[0] == t.boundary[2])
    complain("boundary vertices not distinct");
  if (!bad.empty()) return bad;

  for (const auto& [v, nbrs] : t.rotation) {
    if (nbrs.size() < 2)
      complain("vertex " + std::to_string(v) + " has degree below two");
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] == v) complain("self-loop at " + std::to_string(v));
      if (!t.hasVertex(nbrs[i]))
        complain("edge to unknown vertex " + std::to_string(nbrs[i]));
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        if (nbrs[i] == nbrs[j])
          complain("repeated neighbor " + std::to_string(nbrs[i]) + " at " +
                   std::to_string(v));
    }
  }
  if (!bad.empty()) return bad;

  for (const auto& [v, nbrs] : t.rotation)
    for (VertexId u : nbrs)
      if (!t.hasEdge(u, v))
        complain("edge " + std::to_string(v) + "-" + std::to_string(u) +
                 " not symmetric");
  if (!bad.empty()) return bad;

  std::vector<std::vector<VertexId>> faces;
  try {
    faces = traceAllFaces(t);
  } catch (const Error& e) {
    complain(e.what());
    return bad;
  }

  std::vector<VertexId> outer = outerFaceCycle(t);
  std::size_t outerSeen = 0;
  for (const std::vector<VertexId>& f : faces) {
    if (cyclicallyEqual(f, outer)) {
      ++outerSeen;
      continue;
    }
    if (f.size() != 3) {
      std::ostringstream os;
      os << "face of length " << f.size() << " at vertex " << f[0];
      complain(os.str());
    }
  }
  if (outerSeen != 1)
    complain("outer face does not match the declared boundary");

  std::size_t V = t.rotation.size(), E = t.edgeCount(), F = faces.size();
  if (V + F != E + 2) complain("Euler count violated");
  return bad;
}

// Straight-line drawing of a triangulation.
struct Drawing {
  Triangulation tri;
  std::map<VertexId, Point> coords;

  const Point& at(VertexId v) const { return coords.at(v); }
};

inline bool coordsEqual(const Drawing& a, const Drawing& b) {
  return a.coords == b.coords;
}

// Checks that the drawing is plane with the declared structure: internal
// faces strictly counterclockwise, outer triangle strictly counterclockwise,
// distinct vertex positions. `audit` adds the brute-force segment checks.
inline std::vector<std::string> validateDrawing(const Drawing& d,
                                                bool audit = false) {
  std::vector<std::string> bad = validateTriangulation(d.tri);
  if (!bad.empty()) return bad;

  for (const auto& [v, _] : d.tri.rotation)
    if (!d.coords.count(v))
      bad.push_back("no coordinates for vertex " + std::to_string(v));
  for (const auto& [v, _] : d.coords)
    if (!d.tri.hasVertex(v))
      bad.push_back("coordinates for unknown vertex " + std::to_string(v));
  if (!bad.empty()) return bad;

  {
    std::vector<std::pair<Point, VertexId>> pts;
    for (const auto& [v, p] : d.coords) pts.push_back({p, v});
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
      if (a.first.x != b.first.x) return a.first.x < b.first.x;
      if (a.first.y != b.first.y) return a.first.y < b.first.y;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (pts[i].first == pts[i + 1].first)
        bad.push_back("vertices " + std::to_string(pts[i].second) + " and " +
                      std::to_string(pts[i + 1].second) + " coincide");
  }
  if (!bad.empty()) return bad;

  if (orientation(d.at(d.tri.boundary[0]), d.at(d.tri.boundary[1]),
                  d.at(d.tri.boundary[2])) != Orientation::CounterClockwise)
    bad.push_back("outer triangle is not counterclockwise");

  std::vector<std::array<VertexId, 3>> faces = internalFaces(d.tri);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto& f = faces[i];
    if (orientation(d.at(f[0]), d.at(f[1]), d.at(f[2])) !=
        Orientation::CounterClockwise) {
      std::ostringstream os;
      os << "face " << i << " (" << f[0] << " " << f[1] << " " << f[2]
         << ") is not counterclockwise";
      bad.push_back(os.str());
    }
  }
  if (!bad.empty() || !audit) return bad;

  // Brute-force audit: every edge pair and vertex/edge pair kept apart.
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& [u, nbrs] : d.tri.rotation)
    for (VertexId v : nbrs)
      if (u < v) edges.push_back({u, v});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      auto [a, b] = edges[i];
      auto [c, e] = edges[j];
      bool share = a == c || a == e || b == c || b == e;
      if (share) {
        VertexId w = (a == c || a == e) ? a : b;
        VertexId u = w == a ? b : a;
        VertexId v = w == c ? e : c;
        if (orientation(d.at(w), d.at(u), d.at(v)) == Orientation::Collinear &&
            dot(d.at(u) - d.at(w), d.at(v) - d.at(w)) > 0)
          bad.push_back("edges at vertex " + std::to_string(w) + " overlap");
      } else if (segmentsIntersect(d.at(a), d.at(b), d.at(c), d.at(e))) {
        std::ostringstream os;
        os << "edges " << a << "-" << b << " and " << c << "-" << e
           << " intersect";
        bad.push_back(os.str());
      }
    }
  }
  for (const auto& [v, p] : d.coords) {
    for (const auto& [a, b] : edges) {
      if (v == a || v == b) continue;
      if (orientation(d.at(a), d.at(b), p) == Orientation::Collinear &&
          collinearPointOnSegment(p, d.at(a), d.at(b)))
        bad.push_back("vertex " + std::to_string(v) + " lies on edge " +
                      std::to_string(a) + "-" + std::to_string(b));
    }
  }
  return bad;
}

// Two drawings of one triangulation: the unit of work for morph building.
struct DrawingPair {
  Drawing first, second;
};

// Same triangulation, same rotations (up to cyclic shift), same outer face.
inline bool topologicallyEquivalent(const Drawing& a, const Drawing& b) {
  if (a.tri.rotation.size() != b.tri.rotation.size()) return false;
  for (const auto& [v, rot] : a.tri.rotation) {
    auto it = b.tri.rotation.find(v);
    if (it == b.tri.rotation.end()) return false;
    if (!cyclicallyEqual(rot, it->second)) return false;
  }
  std::vector<VertexId> ba(a.tri.boundary.begin(), a.tri.boundary.end());
  std::vector<VertexId> bb(b.tri.boundary.begin(), b.tri.boundary.end());
  return cyclicallyEqual(ba, bb);
}

struct LinkPolygon {
  VertexId center;
  std::vector<VertexId> ring;  // counterclockwise
  std::vector<Point> points;
};

inline LinkPolygon linkPolygon(const Drawing& d, VertexId p) {
  if (!d.tri.hasVertex(p))
    throw Error(ErrorCode::Unhandled, "link of unknown vertex");
  if (d.tri.isBoundary(p))
    throw Error(ErrorCode::BoundaryVertex, "link of a boundary vertex");
  LinkPolygon link;
  link.center = p;
  link.ring = d.tri.rotation.at(p);
  for (VertexId v : link.ring) link.points.push_back(d.at(v));
  return link;
}

// Everything needed to reverse a contraction.
struct ContractionRecord {
  VertexId p = 0, a = 0;
  std::vector<VertexId> ring;  // counterclockwise, ring[0] == a
  Point positionAtContraction;
};

struct ContractCheck {
  bool ok = true;
  ErrorCode code = ErrorCode::Unhandled;
  std::string detail;
};

namespace detail {

inline std::vector<VertexId> ringStartingAt(const std::vector<VertexId>& rot,
                                            VertexId a) {
  auto it = std::find(rot.begin(), rot.end(), a);
  std::vector<VertexId> ring(it, rot.end());
  ring.insert(ring.end(), rot.begin(), it);
  return ring;
}

}  // namespace detail

// Preconditions for contracting internal vertex p onto its neighbor a.
inline ContractCheck canContract(const Drawing& d, VertexId p, VertexId a) {
  auto fail = [](ErrorCode c, std::string s) {
    return ContractCheck{false, c, std::move(s)};
  };
  if (!d.tri.hasVertex(p) || !d.tri.hasVertex(a))
    return fail(ErrorCode::Unhandled, "unknown vertex");
  if (d.tri.isBoundary(p))
    return fail(ErrorCode::BoundaryVertex, "cannot contract a boundary vertex");
  std::size_t k = d.tri.degree(p);
  if (k > 5)
    return fail(ErrorCode::DegreeTooHigh,
                "degree " + std::to_string(k) + " exceeds five");
  if (!d.tri.hasEdge(p, a))
    return fail(ErrorCode::KernelViolation, "target is not a ring vertex");

  std::vector<VertexId> ring = detail::ringStartingAt(d.tri.rotation.at(p), a);
  for (std::size_t i = 2; i + 2 <= k; ++i)
    if (d.tri.hasEdge(a, ring[i]))
      return fail(ErrorCode::MultiEdge,
                  "contraction would duplicate edge " + std::to_string(a) +
                      "-" + std::to_string(ring[i]));
  for (std::size_t i = 1; i + 1 < k; ++i) {
    if (orientation(d.at(a), d.at(ring[i]), d.at(ring[i + 1])) !=
        Orientation::CounterClockwise)
      return fail(ErrorCode::KernelViolation,
                  "target outside the kernel of the ring of " +
                      std::to_string(p));
  }
  return {};
}

struct ContractResult {
  Drawing drawing;
  ContractionRecord record;
};

// Contract p onto ring vertex a: p's faces are replaced by the fan from a.
inline ContractResult contract(const Drawing& d, VertexId p, VertexId a) {
  ContractCheck chk = canContract(d, p, a);
  if (!chk.ok) throw Error(chk.code, chk.detail);

  ContractionRecord rec;
  rec.p = p;
  rec.a = a;
  rec.ring = detail::ringStartingAt(d.tri.rotation.at(p), a);
  rec.positionAtContraction = d.at(p);

  Drawing out = d;
  const std::vector<VertexId>& ring = rec.ring;
  std::size_t k = ring.size();

  // a: p becomes the far ring arc (s2 .. s_{k-2}).
  {
    std::vector<VertexId>& rot = out.tri.rotation.at(a);
    auto it = std::find(rot.begin(), rot.end(), p);
    it = rot.erase(it);
    if (k >= 4)
      rot.insert(it, ring.begin() + 2, ring.begin() + static_cast<long>(k) - 1);
  }
  // First and last ring vertices just lose p.
  for (VertexId v : {ring[1], ring[k - 1]}) {
    std::vector<VertexId>& rot = out.tri.rotation.at(v);
    rot.erase(std::find(rot.begin(), rot.end(), p));
  }
  // Middle ring vertices gain the new spoke to a in p's slot.
  for (std::size_t i = 2; i + 1 < k; ++i) {
    std::vector<VertexId>& rot = out.tri.rotation.at(ring[i]);
    *std::find(rot.begin(), rot.end(), p) = a;
  }
  out.tri.rotation.erase(p);
  out.coords.erase(p);
  return {std::move(out), std::move(rec)};
}

// Undo a contraction, placing p at `position`, which must lie strictly inside
// the kernel of the ring polygon in the current drawing.
inline Drawing uncontract(const Drawing& d, const ContractionRecord& rec,
                          const Point& position) {
  const std::vector<VertexId>& ring = rec.ring;
  std::size_t k = ring.size();
  if (d.tri.hasVertex(rec.p))
    throw Error(ErrorCode::TopologyMismatch, "vertex to reinsert already present");
  for (VertexId v : ring)
    if (!d.tri.hasVertex(v))
      throw Error(ErrorCode::TopologyMismatch, "ring vertex missing");

  for (std::size_t i = 0; i < k; ++i)
    if (orientation(position, d.at(ring[i]), d.at(ring[(i + 1) % k])) !=
        Orientation::CounterClockwise)
      throw Error(ErrorCode::KernelViolation,
                  "reinsertion point outside the open ring kernel");

  Drawing out = d;
  VertexId p = rec.p, a = rec.a;
  out.tri.rotation[p] = ring;
  out.coords[p] = position;

  {
    std::vector<VertexId>& rot = out.tri.rotation.at(a);
    auto it = std::find(rot.begin(), rot.end(), ring[1]);
    if (it == rot.end())
      throw Error(ErrorCode::TopologyMismatch, "record does not match drawing");
    std::size_t idx = static_cast<std::size_t>(it - rot.begin());
    for (std::size_t i = 2; i + 1 < k; ++i)
      if (rot[(idx + i - 1) % rot.size()] != ring[i])
        throw Error(ErrorCode::TopologyMismatch, "record does not match drawing");
    if (rot[(idx + k - 2) % rot.size()] != ring[k - 1])
      throw Error(ErrorCode::TopologyMismatch, "record does not match drawing");
    // Replace the arc s2..s_{k-2} with p (for triangles: insert p between).
    std::vector<VertexId> next;
    next.reserve(rot.size() - (k - 3));
    for (std::size_t i = 0; i < rot.size(); ++i) {
      std::size_t rel = (i + rot.size() - idx) % rot.size();
      if (rel >= 1 && rel <= k - 3) continue;  // drop s2..s_{k-2}
      next.push_back(rot[i]);
      if (rot[i] == ring[1]) next.push_back(p);
    }
    rot = std::move(next);
  }
  {
    std::vector<VertexId>& rot = out.tri.rotation.at(ring[1]);
    auto it = std::find(rot.begin(), rot.end(), a);
    if (it == rot.end())
      throw Error(ErrorCode::TopologyMismatch, "record does not match drawing");
    rot.insert(it, p);  // between s2 and a
  }
  {
    std::vector<VertexId>& rot = out.tri.rotation.at(ring[k - 1]);
    auto it = std::find(rot.begin(), rot.end(), a);
    if (it == rot.end())
      throw Error(ErrorCode::TopologyMismatch, "record does not match drawing");
    rot.insert(it + 1, p);  // between a and s_{k-2}
  }
  for (std::size_t i = 2; i + 1 < k; ++i) {
    std::vector<VertexId>& rot = out.tri.rotation.at(ring[i]);
    auto it = std::find(rot.begin(), rot.end(), a);
    if (it == rot.end())
      throw Error(ErrorCode::TopologyMismatch, "record does not match drawing");
    *it = p;
  }
  return out;
}

// Internal vertices of degree at most five, ordered by degree then id. Always
// nonempty once the triangulation has an internal vertex.
inline std::vector<VertexId> lowDegreeInternalVertices(const Triangulation& t) {
  std::vector<VertexId> out;
  for (const auto& [v, nbrs] : t.rotation)
    if (!t.isBoundary(v) && nbrs.size() <= 5) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [&](VertexId x, VertexId y) {
    return t.degree(x) < t.degree(y) ||
           (t.degree(x) == t.degree(y) && x < y);
  });
  return out;
}

}  // namespace unimorph
