#pragma once

#include "unimorph/triangulation.hpp"

namespace fixtures {

using unimorph::Drawing;
using unimorph::Point;
using unimorph::Rational;

// Triangle 0,1,2 with center vertex 3.
inline Drawing k4() {
  Drawing d;
  d.tri.boundary = {0, 1, 2};
  d.tri.rotation[0] = {1, 3, 2};
  d.tri.rotation[1] = {2, 3, 0};
  d.tri.rotation[2] = {0, 3, 1};
  d.tri.rotation[3] = {0, 1, 2};
  d.coords[0] = {0, 0};
  d.coords[1] = {4, 0};
  d.coords[2] = {0, 4};
  d.coords[3] = {1, 1};
  return d;
}

// Internal vertex 4 whose ring 0-3-1-2 draws as a dart (reflex at 3), plus
// the notch face (0,1,3).
inline Drawing dartRing() {
  Drawing d;
  d.tri.boundary = {0, 1, 2};
  d.tri.rotation[0] = {1, 3, 4, 2};
  d.tri.rotation[1] = {2, 4, 3, 0};
  d.tri.rotation[2] = {0, 4, 1};
  d.tri.rotation[3] = {4, 0, 1};
  d.tri.rotation[4] = {0, 3, 1, 2};
  d.coords[0] = {0, 0};
  d.coords[1] = {4, 0};
  d.coords[2] = {2, 4};
  d.coords[3] = {2, 1};
  d.coords[4] = {2, 2};
  return d;
}

// Hub 6 of degree six ringed by the three boundary corners and three
// degree-three internal vertices.
inline Drawing wheel6() {
  Drawing d;
  d.tri.boundary = {0, 1, 2};
  d.tri.rotation[0] = {1, 3, 6, 5, 2};
  d.tri.rotation[1] = {2, 4, 6, 3, 0};
  d.tri.rotation[2] = {0, 5, 6, 4, 1};
  d.tri.rotation[3] = {6, 0, 1};
  d.tri.rotation[4] = {2, 6, 1};
  d.tri.rotation[5] = {6, 2, 0};
  d.tri.rotation[6] = {0, 3, 1, 4, 2, 5};
  d.coords[0] = {0, 0};
  d.coords[1] = {8, 0};
  d.coords[2] = {4, 8};
  d.coords[3] = {4, 1};
  d.coords[4] = {5, 4};
  d.coords[5] = {2, 3};
  d.coords[6] = {4, 3};
  return d;
}

// Degree-three outer vertex 0 with interior apex 3; vertex 4 sits inside the
// triangle (3,1,2).  The 4-gon (0,1,4,3) draws reflex at 3.
inline Drawing fanFive() {
  Drawing d;
  d.tri.boundary = {0, 1, 2};
  d.tri.rotation[0] = {1, 3, 2};
  d.tri.rotation[1] = {2, 4, 3, 0};
  d.tri.rotation[2] = {0, 3, 4, 1};
  d.tri.rotation[3] = {0, 1, 4, 2};
  d.tri.rotation[4] = {3, 1, 2};
  d.coords[0] = {0, 0};
  d.coords[1] = {4, 0};
  d.coords[2] = {2, 4};
  d.coords[3] = {Rational(5, 2), 1};
  d.coords[4] = {Rational(14, 5), 2};
  return d;
}

// Every outer vertex has degree four; the second layer is the interior
// triangle (3,4,5).  The 4-gon (0,1,5,4) draws reflex at 5.
inline Drawing octahedron() {
  Drawing d;
  d.tri.boundary = {0, 1, 2};
  d.tri.rotation[0] = {1, 5, 4, 2};
  d.tri.rotation[1] = {2, 3, 5, 0};
  d.tri.rotation[2] = {0, 4, 3, 1};
  d.tri.rotation[3] = {2, 4, 5, 1};
  d.tri.rotation[4] = {3, 2, 0, 5};
  d.tri.rotation[5] = {3, 4, 0, 1};
  d.coords[0] = {0, 0};
  d.coords[1] = {8, 0};
  d.coords[2] = {4, 8};
  d.coords[3] = {5, 3};
  d.coords[4] = {3, 3};
  d.coords[5] = {4, 1};
  return d;
}

// Same outer shell as octahedron() plus vertex 6 inside the second-layer
// triangle, adjacent to all of 3, 4, 5.
inline unimorph::Triangulation sevenShell() {
  unimorph::Triangulation t;
  t.boundary = {0, 1, 2};
  t.rotation[0] = {1, 5, 4, 2};
  t.rotation[1] = {2, 3, 5, 0};
  t.rotation[2] = {0, 4, 3, 1};
  t.rotation[3] = {2, 4, 6, 5, 1};
  t.rotation[4] = {3, 2, 0, 5, 6};
  t.rotation[5] = {3, 6, 4, 0, 1};
  t.rotation[6] = {3, 4, 5};
  return t;
}

inline Drawing stackedOctahedron() {
  Drawing d;
  d.tri = sevenShell();
  d.coords[0] = {0, 0};
  d.coords[1] = {8, 0};
  d.coords[2] = {4, 8};
  d.coords[3] = {5, 3};
  d.coords[4] = {3, 3};
  d.coords[5] = {4, 1};
  d.coords[6] = {4, 2};
  return d;
}

// The same triangulation as stackedOctahedron() drawn skewed: the 4-gon
// (0,5,6,4) is reflex at 5, and its corner 6 lies inside the second layer.
inline Drawing skewSeven() {
  Drawing d;
  d.tri = sevenShell();
  d.coords[0] = {0, 0};
  d.coords[1] = {8, 0};
  d.coords[2] = {4, 8};
  d.coords[3] = {6, Rational(3, 2)};
  d.coords[4] = {2, 3};
  d.coords[5] = {3, 1};
  d.coords[6] = {4, Rational(5, 4)};
  return d;
}

// Hub 5 of degree five: ring 0-1-4-2-3 mixes boundary corners with the two
// internal degree-four vertices 3 and 4.
inline Drawing pentagonWheel() {
  Drawing d;
  d.tri.boundary = {0, 1, 2};
  d.tri.rotation[0] = {1, 5, 3, 2};
  d.tri.rotation[1] = {2, 4, 5, 0};
  d.tri.rotation[2] = {0, 3, 5, 4, 1};
  d.tri.rotation[3] = {5, 2, 0};
  d.tri.rotation[4] = {1, 2, 5};
  d.tri.rotation[5] = {0, 1, 4, 2, 3};
  d.coords[0] = {0, 0};
  d.coords[1] = {8, 0};
  d.coords[2] = {4, 8};
  d.coords[3] = {2, 3};
  d.coords[4] = {6, 3};
  d.coords[5] = {4, 3};
  return d;
}

}  // namespace fixtures
