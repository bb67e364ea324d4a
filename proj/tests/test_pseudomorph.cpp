#include <catch2/catch_amalgamated.hpp>

#include <variant>

#include "fixtures.hpp"
#include "matchers.hpp"
#include "unimorph/pseudomorph.hpp"

using namespace unimorph;

namespace {

ConvexifyTask taskFanFive() {
  // Diagonal 1-3 is drawn, 0-4 is not.
  return {{0, 1, 4, 3}, {{0, 4}}};
}

ConvexifyTask taskOctahedron() {
  // Diagonal 0-5 is drawn, 1-4 is not.
  return {{0, 1, 5, 4}, {{1, 4}}};
}

ConvexifyTask taskSkewSeven() {
  // Diagonal 5-4 is drawn, 0-6 is not.
  return {{0, 5, 6, 4}, {{0, 6}}};
}

// Vertices whose position differs between the two coordinate maps.
std::vector<VertexId> movedVertices(const CoordMap& a, const CoordMap& b) {
  std::vector<VertexId> out;
  for (const auto& kv : a)
    if (!(b.at(kv.first) == kv.second)) out.push_back(kv.first);
  return out;
}

Drawing requireCertified(const Drawing& start, const PseudoMorph& pm) {
  PseudoMorphReport rep = verifyPseudoMorph(pm, start);
  std::string why = rep.problems.empty() ? "certified" : rep.problems.front();
  INFO(why);
  REQUIRE(rep.certified);
  return rep.final;
}

}  // namespace

TEST_CASE("classifying vertices against a convexification task") {
  Drawing d = fixtures::skewSeven();
  ConvexifyTask task = taskOctahedron();  // 4-gon (0,1,5,4), chord 1-4 banned
  CHECK(classifyProblematic(d, task, 2) == ProblematicType::Type1);
  CHECK(classifyProblematic(d, task, 0) == ProblematicType::Type1);
  CHECK(classifyProblematic(d, task, 5) == ProblematicType::Type2);
  CHECK(classifyProblematic(d, task, 4) == ProblematicType::Type2);
  // 3 is adjacent to both ends of the banned chord and one end sees its ring.
  CHECK(classifyProblematic(d, task, 3) == ProblematicType::Type3);
  // 6 is not adjacent to vertex 1 at all.
  CHECK(classifyProblematic(d, task, 6) == ProblematicType::Free);
}

TEST_CASE("partial-move parameter search") {
  SECTION("picks an exact rational parameter on the octahedron") {
    Drawing d = fixtures::octahedron();
    MoveSpec mv;
    mv.mover = 4;
    mv.target = d.at(0);
    mv.frameB = 3;
    mv.frameC = 5;
    Rational s = convexifyParameter(d, mv, {taskOctahedron().quad});
    // Sign breakpoints are 7/15 (corner determinant at 5) and 1; the first
    // feasible midpoint is (7/15 + 1)/2.
    CHECK(s == Rational(11, 15));
  }
  SECTION("reports infeasibility of the apex slide exactly") {
    // Sliding 3 toward 0 keeps the corner determinant at 3 equal to
    // -11(1-s)/5, so no partial extent ever makes the 4-gon convex.
    Drawing d = fixtures::fanFive();
    MoveSpec mv;
    mv.mover = 3;
    mv.target = d.at(0);
    mv.frameB = 1;
    mv.frameC = 2;
    mv.tracked = {4};
    REQUIRE_THROWS_MATCHES(convexifyParameter(d, mv, {taskFanFive().quad}),
                           Error, hasCode(ErrorCode::NoFeasibleParameter));
  }
}

TEST_CASE("convexify4gon straightens the fan 4-gon with one move") {
  Drawing d = fixtures::fanFive();
  ConvexifyTask task = taskFanFive();
  REQUIRE_FALSE(detail::quadStrictlyConvex(d, task.quad));

  auto out = convexify4gon(d, task);
  REQUIRE(out.events.events.size() == 1);
  REQUIRE(std::holds_alternative<LinearEvent>(out.events.events[0]));
  CHECK(detail::quadStrictlyConvex(out.end, task.quad));

  // Only the reflex corner 3 moves; it is interior, so a kernel move
  // suffices and no outer vertex is disturbed.
  auto moved = movedVertices(d.coords, out.end.coords);
  REQUIRE(moved == std::vector<VertexId>{3});

  Drawing fin = requireCertified(d, out.events);
  CHECK(coordsEqual(fin, out.end));
}

TEST_CASE("convexify4gon rejects a 4-gon pinned behind an outer edge") {
  // Corner 4 sits between the outer vertices 1 and 2 of the 4-gon, and the
  // edge 1->2 is an outer edge: every interior point lies strictly to its
  // left, so the corner determinant at 4 can never turn positive.
  Drawing d = fixtures::fanFive();
  ConvexifyTask task{{1, 4, 2, 3}, {}};
  REQUIRE_THROWS_MATCHES(convexify4gon(d, task), Error,
                         hasCode(ErrorCode::NoFeasibleParameter));
}

TEST_CASE("degree-four outer shell, 4-gon straddling an outer edge") {
  SECTION("six vertices: one slide of the free interior corner") {
    Drawing d = fixtures::octahedron();
    ConvexifyTask task = taskOctahedron();
    auto out = detail::caseB(d, task);
    REQUIRE(out.events.events.size() == 1);
    CHECK(detail::quadStrictlyConvex(out.end, task.quad));
    // The chosen slide is 4 toward 0 at extent 11/15 exactly.
    auto moved = movedVertices(d.coords, out.end.coords);
    REQUIRE(moved == std::vector<VertexId>{4});
    CHECK(out.end.at(4) == Point{Rational(4, 5), Rational(4, 5)});
    requireCertified(d, out.events);
  }

  SECTION("seven vertices: the stacked vertex rides along exactly") {
    Drawing d = fixtures::stackedOctahedron();
    ConvexifyTask task = taskOctahedron();
    auto before = barycentric(d.at(6), d.at(4), d.at(3), d.at(5));
    auto out = detail::caseB(d, task);
    REQUIRE(out.events.events.size() == 1);
    CHECK(detail::quadStrictlyConvex(out.end, task.quad));

    auto moved = movedVertices(d.coords, out.end.coords);
    REQUIRE(moved == std::vector<VertexId>{4, 6});
    CHECK(out.end.at(4) == Point{Rational(4, 5), Rational(4, 5)});
    CHECK(out.end.at(6) == Point{Rational(69, 20), Rational(29, 20)});

    // The follower keeps its barycentric coordinates in the moving frame.
    auto after =
        barycentric(out.end.at(6), out.end.at(4), out.end.at(3), out.end.at(5));
    CHECK(after == before);
    requireCertified(d, out.events);
  }
}

TEST_CASE("degree-four outer shell, 4-gon with a corner inside the layer") {
  Drawing d = fixtures::skewSeven();
  ConvexifyTask task = taskSkewSeven();
  REQUIRE_FALSE(detail::quadStrictlyConvex(d, task.quad));
  auto before = barycentric(d.at(6), d.at(3), d.at(4), d.at(5));

  auto out = detail::caseB(d, task);
  REQUIRE(out.events.events.size() == 1);
  CHECK(detail::quadStrictlyConvex(out.end, task.quad));
  // The auxiliary 4-gon through the moving corner 3 must end convex too.
  CHECK(detail::quadStrictlyConvex(out.end, {0, 5, 3, 4}));

  // Mover 3 heads toward outer vertex 2 (the slide toward 1 is infeasible,
  // as it drags the auxiliary 4-gon the wrong way); 6 rides along.
  auto moved = movedVertices(d.coords, out.end.coords);
  REQUIRE(moved == std::vector<VertexId>{3, 6});
  Vector full = d.at(2) - d.at(3);
  Vector part = out.end.at(3) - d.at(3);
  CHECK(cross(full, part) == 0);
  CHECK(dot(full, part) > 0);

  auto after =
      barycentric(out.end.at(6), out.end.at(3), out.end.at(4), out.end.at(5));
  CHECK(after == before);
  requireCertified(d, out.events);
}

TEST_CASE("convexify4gon clears blocking vertices by contraction") {
  // Full pipeline on the stacked drawing: vertex 6 (and then the freed
  // shell) must contract away before the straddling 4-gon can be fixed.
  Drawing d = fixtures::stackedOctahedron();
  ConvexifyTask task = taskOctahedron();
  auto out = convexify4gon(d, task);
  CHECK(detail::quadStrictlyConvex(out.end, task.quad));
  CHECK(out.end.tri.rotation.size() == d.tri.rotation.size());
  Drawing fin = requireCertified(d, out.events);
  CHECK(coordsEqual(fin, out.end));
}

TEST_CASE("boundary normalization") {
  Drawing d1 = fixtures::k4();
  SECTION("identical outer triangles need no tail") {
    auto align = normalizeBoundary(d1, d1);
    CHECK(align.tail.empty());
    CHECK(coordsEqual(align.aligned, d1));
  }
  SECTION("a translated copy needs one linear event") {
    Drawing d2 = d1;
    for (auto& kv : d2.coords) kv.second = kv.second + Vector{3, 2};
    auto align = normalizeBoundary(d1, d2);
    REQUIRE(align.tail.size() == 1);
    CHECK(coordsEqual(align.aligned, d1));
    CHECK(align.tail.back().target == d2.coords);
  }
  SECTION("a quarter turn decomposes into three shears") {
    Drawing d2 = d1;
    for (auto& kv : d2.coords)
      kv.second = Point{-kv.second.y, kv.second.x};
    auto align = normalizeBoundary(d1, d2);
    REQUIRE(align.tail.size() == 3);
    CHECK(coordsEqual(align.aligned, d1));
    CHECK(align.tail.back().target == d2.coords);
  }
}

TEST_CASE("pseudo-morph construction") {
  SECTION("identical drawings produce no events") {
    Drawing d = fixtures::k4();
    PseudoMorph pm = buildPseudoMorph(d, d);
    CHECK(pm.events.empty());
    CHECK(countSteps(pm).total() == 0);
  }

  SECTION("moving one interior vertex costs one contraction round trip") {
    Drawing d1 = fixtures::k4();
    Drawing d2 = d1;
    d2.coords[3] = {2, 1};
    PseudoMorph pm = buildPseudoMorph(d1, d2);
    REQUIRE(pm.events.size() == 1);
    REQUIRE(std::holds_alternative<NestedEvent>(pm.events[0]));
    CHECK(std::get<NestedEvent>(pm.events[0]).p == 3);
    CHECK(countSteps(pm).total() == 2);
    Drawing fin = requireCertified(d1, pm);
    CHECK(coordsEqual(fin, d2));
  }

  SECTION("six-vertex pair with every interior vertex displaced") {
    Drawing d1 = fixtures::octahedron();
    Drawing d2 = d1;
    d2.coords[3] = {Rational(9, 2), Rational(7, 2)};
    d2.coords[4] = {Rational(7, 2), Rational(5, 2)};
    d2.coords[5] = {Rational(9, 2), Rational(3, 2)};
    PseudoMorph pm = buildPseudoMorph(d1, d2);
    Drawing fin = requireCertified(d1, pm);
    CHECK(coordsEqual(fin, d2));
    CHECK(coordsEqual(applyPseudoMorph(d1, pm), d2));
    CHECK(countSteps(pm).total() <= 2 * 6);
  }

  SECTION("same seven-vertex triangulation drawn two very different ways") {
    Drawing d1 = fixtures::stackedOctahedron();
    Drawing d2 = fixtures::skewSeven();
    PseudoMorph pm = buildPseudoMorph(d1, d2);
    Drawing fin = requireCertified(d1, pm);
    CHECK(coordsEqual(fin, d2));
    CHECK(countSteps(pm).total() <= 2 * 7);
  }

  SECTION("a rotated copy is reached by the alignment tail alone") {
    Drawing d1 = fixtures::fanFive();
    Drawing d2 = d1;
    for (auto& kv : d2.coords)
      kv.second = Point{-kv.second.y, kv.second.x};
    PseudoMorph pm = buildPseudoMorph(d1, d2);
    CHECK(pm.events.size() == 3);
    CHECK(countSteps(pm).total() == 3);
    Drawing fin = requireCertified(d1, pm);
    CHECK(coordsEqual(fin, d2));
  }

  SECTION("topology mismatch is reported up front") {
    REQUIRE_THROWS_MATCHES(
        buildPseudoMorph(fixtures::k4(), fixtures::fanFive()), Error,
        hasCode(ErrorCode::TopologyMismatch));
  }
}

TEST_CASE("contraction selection over a pair") {
  Drawing d1 = fixtures::stackedOctahedron();
  Drawing d2 = fixtures::skewSeven();
  ContractionChoice choice = selectContraction(d1, d2);
  REQUIRE(std::holds_alternative<DirectContraction>(choice));
  auto dc = std::get<DirectContraction>(choice);
  CHECK(canContract(d1, dc.p, dc.a).ok);
  CHECK(canContract(d2, dc.p, dc.a).ok);
}
