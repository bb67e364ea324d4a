#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "unimorph/morph.hpp"

namespace unimorph {

namespace detail {

inline std::vector<std::pair<VertexId, VertexId>> undirectedEdges(
    const Triangulation& t) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& [u, nbrs] : t.rotation)
    for (VertexId v : nbrs)
      if (u < v) edges.push_back({u, v});
  return edges;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// values="a;b;c" list of one coordinate across the keyframes.
inline std::string animValues(const std::vector<CoordMap>& frames, VertexId v,
                              bool isX) {
  std::string out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Point& p = frames[i].at(v);
    if (i) out += ';';
    out += fmt(ratToDouble(isX ? p.x : p.y));
  }
  return out;
}

}  // namespace detail

// Animated vector rendering: every step is one animation segment traversed
// at uniform speed (equal key spacing), edges drawn as line segments. A
// morph with no steps renders as a static frame.
inline std::string exportSvg(const Morph& m, double secondsPerStep = 1.2) {
  if (m.keyframes.empty())
    throw Error(ErrorCode::InvalidEndpoint, "morph has no keyframes");
  double minX = 0, maxX = 0, minY = 0, maxY = 0;
  bool seen = false;
  for (const CoordMap& kf : m.keyframes)
    for (const auto& [v, p] : kf) {
      double x = ratToDouble(p.x), y = ratToDouble(p.y);
      if (!seen) {
        minX = maxX = x;
        minY = maxY = y;
        seen = true;
      }
      minX = std::min(minX, x);
      maxX = std::max(maxX, x);
      minY = std::min(minY, y);
      maxY = std::max(maxY, y);
    }
  double span = std::max({maxX - minX, maxY - minY, 1.0});
  double margin = span / 20;
  double strokeW = span / 250;

  std::size_t k = m.steps();
  double dur = secondsPerStep * static_cast<double>(k);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << detail::fmt(minX - margin) << ' ' << detail::fmt(minY - margin) << ' '
      << detail::fmt(maxX - minX + 2 * margin) << ' '
      << detail::fmt(maxY - minY + 2 * margin) << "\">\n";
  // Flip the y axis so the drawing's orientation matches the screen.
  svg << "<g transform=\"translate(0 " << detail::fmt(minY + maxY)
      << ") scale(1 -1)\">\n";

  auto animate = [&](const char* attr, VertexId v, bool isX) {
    svg << "    <animate attributeName=\"" << attr << "\" values=\""
        << detail::animValues(m.keyframes, v, isX) << "\" dur=\""
        << detail::fmt(dur) << "s\" repeatCount=\"indefinite\"/>\n";
  };

  const CoordMap& f0 = m.keyframes.front();
  for (const auto& [u, v] : detail::undirectedEdges(m.tri)) {
    svg << "  <line x1=\"" << detail::fmt(ratToDouble(f0.at(u).x)) << "\" y1=\""
        << detail::fmt(ratToDouble(f0.at(u).y)) << "\" x2=\""
        << detail::fmt(ratToDouble(f0.at(v).x)) << "\" y2=\""
        << detail::fmt(ratToDouble(f0.at(v).y)) << "\" stroke=\"#345\""
        << " stroke-width=\"" << detail::fmt(strokeW) << "\">\n";
    if (k > 0) {
      animate("x1", u, true);
      animate("y1", u, false);
      animate("x2", v, true);
      animate("y2", v, false);
    }
    svg << "  </line>\n";
  }
  for (const auto& [v, p] : f0) {
    svg << "  <circle cx=\"" << detail::fmt(ratToDouble(p.x)) << "\" cy=\""
        << detail::fmt(ratToDouble(p.y)) << "\" r=\""
        << detail::fmt(2 * strokeW) << "\" fill=\""
        << (m.tri.isBoundary(v) ? "#a33" : "#333") << "\">\n";
    if (k > 0) {
      animate("cx", v, true);
      animate("cy", v, false);
    }
    svg << "  </circle>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

// Per-step table: index, exact unit-free direction (largest component
// normalized to one), and the longest vertex displacement.
inline std::string exportCsv(const Morph& m) {
  std::ostringstream csv;
  csv << "step,direction_x,direction_y,max_displacement\n";
  for (std::size_t i = 0; i + 1 < m.keyframes.size(); ++i) {
    DirectionResult dr = directionOf(m.keyframes[i], m.keyframes[i + 1]);
    std::string dx = "0", dy = "0";
    if (const Direction* dir = std::get_if<Direction>(&dr)) {
      Rational ax = abs(dir->dir.dx), ay = abs(dir->dir.dy);
      Rational scale = std::max(ax, ay);
      dx = ratToString(dir->dir.dx / scale);
      dy = ratToString(dir->dir.dy / scale);
    } else if (std::holds_alternative<NotUnidirectional>(dr)) {
      dx = dy = "mixed";
    }
    Rational worst(0);
    for (const auto& [v, p] : m.keyframes[i]) {
      Vector d = m.keyframes[i + 1].at(v) - p;
      worst = std::max(worst, dot(d, d));
    }
    csv << i << ',' << dx << ',' << dy << ','
        << detail::fmt(std::sqrt(ratToDouble(worst))) << '\n';
  }
  return csv.str();
}

}  // namespace unimorph
