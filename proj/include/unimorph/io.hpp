#pragma once

#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "unimorph/morph.hpp"

namespace unimorph {

namespace detail {

inline std::pair<std::size_t, std::size_t> lineColumnAt(const std::string& text,
                                                        std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline nlohmann::json parseText(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = lineColumnAt(text, e.byte ? e.byte - 1 : 0);
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " +
                    std::to_string(col) + ": " + e.what());
  }
}

[[noreturn]] inline void badShape(const std::string& where,
                                  const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* name,
                                   const std::string& where) {
  if (!j.is_object()) badShape(where, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) badShape(where, std::string("missing field '") + name + "'");
  return *it;
}

inline VertexId asVertex(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    badShape(where, "vertex id must be a nonnegative integer");
  return j.get<VertexId>();
}

inline VertexId vertexFromKey(const std::string& key,
                              const std::string& where) {
  if (key.empty()) badShape(where, "empty vertex key");
  VertexId v = 0;
  for (char c : key) {
    if (c < '0' || c > '9')
      badShape(where, "vertex key '" + key + "' is not a number");
    v = v * 10 + static_cast<VertexId>(c - '0');
  }
  return v;
}

inline Point pointFromJson(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    badShape(where, "coordinate must be a pair of rational strings");
  return {ratFromString(j[0].get<std::string>()),
          ratFromString(j[1].get<std::string>())};
}

inline nlohmann::json pointToJson(const Point& p) {
  return nlohmann::json::array({ratToString(p.x), ratToString(p.y)});
}

inline CoordMap coordMapFromJson(const nlohmann::json& j,
                                 const std::set<VertexId>& vertices,
                                 const std::string& where) {
  if (!j.is_object()) badShape(where, "expected an object of coordinates");
  CoordMap out;
  for (const auto& [key, val] : j.items()) {
    VertexId v = vertexFromKey(key, where);
    if (!vertices.count(v))
      badShape(where, "coordinates for unknown vertex " + key);
    out[v] = pointFromJson(val, where + "." + key);
  }
  if (out.size() != vertices.size())
    badShape(where, "coordinates do not cover every vertex");
  return out;
}

inline nlohmann::json coordMapToJson(const CoordMap& coords) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, p] : coords) j[std::to_string(v)] = pointToJson(p);
  return j;
}

inline nlohmann::json coordPreviewJson(const CoordMap& coords) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, p] : coords)
    j[std::to_string(v)] =
        nlohmann::json::array({ratToDouble(p.x), ratToDouble(p.y)});
  return j;
}

inline Triangulation triangulationFromJson(const nlohmann::json& j,
                                           const std::string& where) {
  const nlohmann::json& jv = field(j, "vertices", where);
  if (!jv.is_array()) badShape(where + ".vertices", "expected an array");
  std::set<VertexId> vertices;
  for (const auto& e : jv) {
    VertexId v = asVertex(e, where + ".vertices");
    if (!vertices.insert(v).second)
      badShape(where + ".vertices", "duplicate vertex " + std::to_string(v));
  }

  Triangulation t;
  const nlohmann::json& jr = field(j, "rotation", where);
  if (!jr.is_object()) badShape(where + ".rotation", "expected an object");
  for (const auto& [key, val] : jr.items()) {
    VertexId v = vertexFromKey(key, where + ".rotation");
    if (!vertices.count(v))
      badShape(where + ".rotation", "rotation for unknown vertex " + key);
    if (!val.is_array()) badShape(where + ".rotation." + key, "expected an array");
    std::vector<VertexId> nbrs;
    for (const auto& e : val) {
      VertexId w = asVertex(e, where + ".rotation." + key);
      if (!vertices.count(w))
        badShape(where + ".rotation." + key,
                 "edge to unknown vertex " + std::to_string(w));
      nbrs.push_back(w);
    }
    t.rotation[v] = std::move(nbrs);
  }
  if (t.rotation.size() != vertices.size())
    badShape(where + ".rotation", "rotations do not cover every vertex");

  const nlohmann::json& jb = field(j, "boundary", where);
  if (!jb.is_array() || jb.size() != 3)
    badShape(where + ".boundary", "expected three vertex ids");
  for (int i = 0; i < 3; ++i) {
    t.boundary[i] = asVertex(jb[i], where + ".boundary");
    if (!vertices.count(t.boundary[i]))
      badShape(where + ".boundary", "unknown boundary vertex");
  }
  return t;
}

inline nlohmann::json triangulationToJson(const Triangulation& t) {
  nlohmann::json j;
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& [v, _] : t.rotation) verts.push_back(v);
  j["vertices"] = std::move(verts);
  nlohmann::json rot = nlohmann::json::object();
  for (const auto& [v, nbrs] : t.rotation) rot[std::to_string(v)] = nbrs;
  j["rotation"] = std::move(rot);
  j["boundary"] = nlohmann::json::array(
      {t.boundary[0], t.boundary[1], t.boundary[2]});
  return j;
}

inline std::set<VertexId> vertexSet(const Triangulation& t) {
  std::set<VertexId> s;
  for (const auto& [v, _] : t.rotation) s.insert(v);
  return s;
}

}  // namespace detail

// Drawing-pair file: one triangulation, two exact coordinate maps. The
// optional float preview block is for human inspection and is ignored when
// reading.
inline std::string serializePair(const DrawingPair& pr, bool preview = false) {
  nlohmann::json j = detail::triangulationToJson(pr.first.tri);
  j["coords"] = {{"first", detail::coordMapToJson(pr.first.coords)},
                 {"second", detail::coordMapToJson(pr.second.coords)}};
  if (preview)
    j["preview"] = {{"first", detail::coordPreviewJson(pr.first.coords)},
                    {"second", detail::coordPreviewJson(pr.second.coords)}};
  return j.dump(2) + "\n";
}

inline DrawingPair parsePair(const std::string& text) {
  nlohmann::json j = detail::parseText(text);
  Triangulation t = detail::triangulationFromJson(j, "pair");
  std::set<VertexId> vertices = detail::vertexSet(t);
  const nlohmann::json& jc = detail::field(j, "coords", "pair");
  DrawingPair pr;
  pr.first.tri = t;
  pr.second.tri = t;
  pr.first.coords = detail::coordMapFromJson(
      detail::field(jc, "first", "pair.coords"), vertices, "pair.coords.first");
  pr.second.coords =
      detail::coordMapFromJson(detail::field(jc, "second", "pair.coords"),
                               vertices, "pair.coords.second");
  return pr;
}

// Morph file: triangulation, exact keyframes, and one provenance tag per
// step describing which construction event produced it.
inline std::string serializeMorph(const Morph& m, bool preview = false) {
  nlohmann::json j;
  j["triangulation"] = detail::triangulationToJson(m.tri);
  nlohmann::json frames = nlohmann::json::array();
  for (const CoordMap& kf : m.keyframes)
    frames.push_back(detail::coordMapToJson(kf));
  j["keyframes"] = std::move(frames);
  j["provenance"] = m.notes;
  if (preview) {
    nlohmann::json prev = nlohmann::json::array();
    for (const CoordMap& kf : m.keyframes)
      prev.push_back(detail::coordPreviewJson(kf));
    j["preview"] = std::move(prev);
  }
  return j.dump(2) + "\n";
}

inline Morph parseMorph(const std::string& text) {
  nlohmann::json j = detail::parseText(text);
  Morph m;
  m.tri = detail::triangulationFromJson(
      detail::field(j, "triangulation", "morph"), "morph.triangulation");
  std::set<VertexId> vertices = detail::vertexSet(m.tri);
  const nlohmann::json& jk = detail::field(j, "keyframes", "morph");
  if (!jk.is_array()) detail::badShape("morph.keyframes", "expected an array");
  for (std::size_t i = 0; i < jk.size(); ++i)
    m.keyframes.push_back(detail::coordMapFromJson(
        jk[i], vertices, "morph.keyframes[" + std::to_string(i) + "]"));
  if (auto it = j.find("provenance"); it != j.end()) {
    if (!it->is_array())
      detail::badShape("morph.provenance", "expected an array");
    for (const auto& e : *it) {
      if (!e.is_string())
        detail::badShape("morph.provenance", "tags must be strings");
      m.notes.push_back(e.get<std::string>());
    }
    if (!m.notes.empty() && m.notes.size() != m.steps())
      detail::badShape("morph.provenance",
                       "expected one tag per step or none");
  }
  return m;
}

}  // namespace unimorph
