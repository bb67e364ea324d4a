#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "matchers.hpp"
#include "unimorph/exporters.hpp"
#include "unimorph/generate.hpp"
#include "unimorph/io.hpp"
#include "unimorph/pseudomorph.hpp"
#include "unimorph/reinsert.hpp"
#include "unimorph/verify.hpp"

using namespace unimorph;

namespace {

std::size_t countOccurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0, pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("drawing pair files round-trip exactly") {
  DrawingPair pr = generatePair(10, 5);
  pr.second.coords[4] = {Rational(-22, 7), Rational(355, 113)};

  for (bool preview : {false, true}) {
    DrawingPair back = parsePair(serializePair(pr, preview));
    CHECK(coordsEqual(back.first, pr.first));
    CHECK(coordsEqual(back.second, pr.second));
    CHECK(back.first.tri.rotation == pr.first.tri.rotation);
    CHECK(back.first.tri.boundary == pr.first.tri.boundary);
    CHECK(back.second.tri.rotation == pr.second.tri.rotation);
  }
}

TEST_CASE("hand-written pair file parses to the expected drawing") {
  std::string text = R"({
    "vertices": [0, 1, 2, 3],
    "rotation": {"0": [1, 3, 2], "1": [2, 3, 0], "2": [0, 3, 1], "3": [0, 1, 2]},
    "boundary": [0, 1, 2],
    "coords": {
      "first":  {"0": ["0", "0"], "1": ["4", "0"], "2": ["0", "4"], "3": ["1", "1"]},
      "second": {"0": ["0", "0"], "1": ["4", "0"], "2": ["0", "4"], "3": ["7/5", "1/3"]}
    }
  })";
  DrawingPair pr = parsePair(text);
  CHECK(coordsEqual(pr.first, fixtures::k4()));
  CHECK(pr.second.at(3) == Point{Rational(7, 5), Rational(1, 3)});
  CHECK(topologicallyEquivalent(pr.first, pr.second));
  CHECK(validateDrawing(pr.first, true).empty());
  CHECK(validateDrawing(pr.second, true).empty());
}

TEST_CASE("morph files round-trip exactly") {
  Drawing d1 = fixtures::k4();
  Drawing d2 = d1;
  d2.coords[3] = {Rational(3, 2), Rational(3, 2)};
  Morph m = convert(buildPseudoMorph(d1, d2), d1);
  REQUIRE(verifyMorph(m).certified);

  Morph back = parseMorph(serializeMorph(m));
  CHECK(back.keyframes == m.keyframes);
  CHECK(back.notes == m.notes);
  CHECK(back.tri.rotation == m.tri.rotation);
  CHECK(back.tri.boundary == m.tri.boundary);
  CHECK(verifyMorph(back).certified);

  SECTION("provenance is optional") {
    Morph bare = m;
    bare.notes.clear();
    Morph again = parseMorph(serializeMorph(bare));
    CHECK(again.notes.empty());
    CHECK(again.keyframes == m.keyframes);
  }
  SECTION("preview block is ignored when reading") {
    Morph again = parseMorph(serializeMorph(m, true));
    CHECK(again.keyframes == m.keyframes);
  }
}

TEST_CASE("malformed files are rejected with diagnostics") {
  SECTION("truncated input names the line and column") {
    try {
      parsePair("{\n  \"vertices\": [0, 1");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("missing fields") {
    CHECK_THROWS_MATCHES(parsePair("{}"), Error,
                         hasCode(ErrorCode::ParseError));
    CHECK_THROWS_MATCHES(
        parsePair(R"({"vertices": [0,1,2], "rotation": {}, "boundary": [0,1,2]})"),
        Error, hasCode(ErrorCode::ParseError));
  }
  SECTION("rotation mentions an unknown vertex") {
    std::string text = R"({
      "vertices": [0, 1, 2],
      "rotation": {"0": [1, 2], "1": [2, 0], "2": [0, 9]},
      "boundary": [0, 1, 2],
      "coords": {"first": {}, "second": {}}
    })";
    CHECK_THROWS_MATCHES(parsePair(text), Error,
                         hasCode(ErrorCode::ParseError));
  }
  SECTION("bad rational literal") {
    std::string text = R"({
      "vertices": [0, 1, 2],
      "rotation": {"0": [1, 2], "1": [2, 0], "2": [0, 1]},
      "boundary": [0, 1, 2],
      "coords": {
        "first":  {"0": ["0", "0"], "1": ["1", "0"], "2": ["0.5", "1"]},
        "second": {"0": ["0", "0"], "1": ["1", "0"], "2": ["1/2", "1"]}
      }
    })";
    CHECK_THROWS_MATCHES(parsePair(text), Error,
                         hasCode(ErrorCode::ParseError));
  }
  SECTION("coordinates must cover every vertex") {
    std::string text = R"({
      "vertices": [0, 1, 2],
      "rotation": {"0": [1, 2], "1": [2, 0], "2": [0, 1]},
      "boundary": [0, 1, 2],
      "coords": {
        "first":  {"0": ["0", "0"], "1": ["1", "0"]},
        "second": {"0": ["0", "0"], "1": ["1", "0"], "2": ["0", "1"]}
      }
    })";
    CHECK_THROWS_MATCHES(parsePair(text), Error,
                         hasCode(ErrorCode::ParseError));
  }
  SECTION("boundary must hold three known vertices") {
    std::string text = R"({
      "vertices": [0, 1, 2],
      "rotation": {"0": [1, 2], "1": [2, 0], "2": [0, 1]},
      "boundary": [0, 1],
      "coords": {"first": {"0": ["0","0"], "1": ["1","0"], "2": ["0","1"]},
                 "second": {"0": ["0","0"], "1": ["1","0"], "2": ["0","1"]}}
    })";
    CHECK_THROWS_MATCHES(parsePair(text), Error,
                         hasCode(ErrorCode::ParseError));
  }
  SECTION("provenance tag count must match the step count") {
    Morph m;
    m.tri = fixtures::k4().tri;
    m.keyframes = {fixtures::k4().coords};
    m.notes = {"phantom"};
    CHECK_THROWS_MATCHES(parseMorph(serializeMorph(m)), Error,
                         hasCode(ErrorCode::ParseError));
  }
}

TEST_CASE("svg export animates one segment per step") {
  Drawing d1 = fixtures::k4();
  Drawing d2 = d1;
  d2.coords[3] = {Rational(3, 2), Rational(3, 2)};
  Morph m = convert(buildPseudoMorph(d1, d2), d1);
  REQUIRE(m.steps() == 2);

  std::string svg = exportSvg(m);
  CHECK(svg.find("viewBox") != std::string::npos);
  // Four animated attributes per edge, two per vertex.
  CHECK(countOccurrences(svg, "<animate ") ==
        4 * m.tri.edgeCount() + 2 * m.tri.vertexCount());
  CHECK(countOccurrences(svg, "<line ") == m.tri.edgeCount());
  // Every value list spans all keyframes: two semicolons for three frames.
  CHECK(svg.find("values=") != std::string::npos);

  SECTION("a morph with no steps renders statically") {
    Morph still;
    still.tri = d1.tri;
    still.keyframes = {d1.coords};
    std::string flat = exportSvg(still);
    CHECK(countOccurrences(flat, "<animate ") == 0);
    CHECK(countOccurrences(flat, "<line ") == still.tri.edgeCount());
  }
}

TEST_CASE("csv export lists every step") {
  Drawing d1 = fixtures::k4();
  Morph single;
  single.tri = d1.tri;
  single.keyframes = {d1.coords, d1.coords};
  single.keyframes[1][3] = d1.at(3) + Vector{1, 2};
  single.notes = {"move"};

  std::string csv = exportCsv(single);
  CHECK(csv ==
        "step,direction_x,direction_y,max_displacement\n"
        "0,1/2,1,2.23607\n");

  Drawing d2 = d1;
  d2.coords[3] = {Rational(3, 2), Rational(3, 2)};
  Morph m = convert(buildPseudoMorph(d1, d2), d1);
  std::string rows = exportCsv(m);
  CHECK(static_cast<std::size_t>(std::count(rows.begin(), rows.end(), '\n')) ==
        m.steps() + 1);
}
