#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "support.hpp"
#include "unimorph/region.hpp"

using namespace unimorph;
using testsupport::randInt;
using testsupport::randRational;

namespace {

ConvexRegion unitSquare(bool open) {
  std::vector<HalfPlane> cs = {
      HalfPlane{{-1, 0}, 0, open},  // x >= 0
      HalfPlane{{1, 0}, 1, open},   // x <= 1
      HalfPlane{{0, -1}, 0, open},  // y >= 0
      HalfPlane{{0, 1}, 1, open},   // y <= 1
  };
  return ConvexRegion::fromConstraints(
      cs, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

}  // namespace

TEST_CASE("segment intersection predicate") {
  CHECK(segmentsIntersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  CHECK(segmentsIntersect({0, 0}, {2, 0}, {1, 0}, {1, 5}));   // T-touch
  CHECK(segmentsIntersect({0, 0}, {2, 0}, {2, 0}, {3, 4}));   // endpoint
  CHECK(segmentsIntersect({0, 0}, {4, 0}, {1, 0}, {3, 0}));   // overlap
  CHECK_FALSE(segmentsIntersect({0, 0}, {2, 0}, {0, 1}, {2, 1}));
  CHECK_FALSE(segmentsIntersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
}

TEST_CASE("triangle region membership") {
  ConvexRegion closed = ConvexRegion::triangle({0, 0}, {4, 0}, {0, 4}, false);
  ConvexRegion open = ConvexRegion::triangle({0, 0}, {4, 0}, {0, 4}, true);

  CHECK(closed.contains({1, 1}));
  CHECK(open.contains({1, 1}));
  CHECK(closed.contains({0, 0}));
  CHECK_FALSE(open.contains({0, 0}));
  CHECK(closed.contains({2, 0}));
  CHECK_FALSE(open.contains({2, 0}));
  CHECK_FALSE(closed.contains({3, 3}));
  CHECK(open.closureContains({2, 2}));

  CHECK_THROWS_AS(ConvexRegion::triangle({0, 0}, {0, 4}, {4, 0}, false), Error);
  CHECK_THROWS_AS(ConvexRegion::triangle({0, 0}, {2, 2}, {4, 4}, false), Error);
}

TEST_CASE("kernel of a dart polygon") {
  std::vector<Point> dart = {{0, 0}, {2, 1}, {4, 0}, {2, 4}};
  ConvexRegion k = kernelOfPolygon(dart);

  CHECK(k.contains({2, 1}));
  CHECK(k.contains({2, 4}));
  CHECK_FALSE(k.contains({0, 0}));
  CHECK_FALSE(k.contains({4, 0}));
  CHECK(k.contains({2, 2}));

  auto rep = k.representative();
  REQUIRE(rep.has_value());
  CHECK(k.contains(*rep));

  // Reversing the vertex order names the same polygon and kernel.
  std::vector<Point> rev(dart.rbegin(), dart.rend());
  ConvexRegion k2 = kernelOfPolygon(rev);
  CHECK(k2.contains({2, 1}));
  CHECK_FALSE(k2.contains({0, 0}));

  // A convex polygon is its own kernel.
  std::vector<Point> square = {{0, 0}, {3, 0}, {3, 3}, {0, 3}};
  ConvexRegion ks = kernelOfPolygon(square);
  for (const Point& p : square) CHECK(ks.contains(p));
  CHECK(ks.contains({1, 2}));
  CHECK_FALSE(ks.contains({4, 1}));

  CHECK_THROWS_AS(
      kernelOfPolygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}}),  // bowtie
      Error);
  CHECK_THROWS_AS(kernelOfPolygon({{0, 0}, {1, 1}}), Error);
}

TEST_CASE("kernel points see every vertex") {
  std::mt19937_64 rng(808);
  // Four-point star around (4, 4); star-shaped but far from convex.
  std::vector<Point> comb = {{4, 0}, {5, 3}, {8, 4}, {5, 5},
                             {4, 8}, {3, 5}, {0, 4}, {3, 3}};
  REQUIRE(polygonIsSimple(comb));
  ConvexRegion k = kernelOfPolygon(comb);
  CHECK(k.contains({4, 4}));
  auto rep = k.representative();
  REQUIRE(rep.has_value());
  // Visibility: the segment from the representative to each vertex stays
  // weakly left of every edge line it passes; equivalently it never crosses
  // a polygon edge transversally.
  for (const Point& v : comb) {
    for (std::size_t e = 0; e < comb.size(); ++e) {
      const Point &a = comb[e], &b = comb[(e + 1) % comb.size()];
      if (v == a || v == b) continue;
      int oa = sign(doubledArea(*rep, v, a));
      int ob = sign(doubledArea(*rep, v, b));
      int o1 = sign(doubledArea(a, b, *rep));
      int o2 = sign(doubledArea(a, b, v));
      bool proper = ((oa > 0 && ob < 0) || (oa < 0 && ob > 0)) &&
                    ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0));
      CHECK_FALSE(proper);
    }
  }
  (void)rng;
}

TEST_CASE("projection of the unit square") {
  SlabInterval openBand = projectOntoNormal(unitSquare(true), {1, 0});
  REQUIRE(openBand.lo.has_value());
  REQUIRE(openBand.hi.has_value());
  CHECK(*openBand.lo == 0);
  CHECK(*openBand.hi == 1);
  CHECK(openBand.loOpen);
  CHECK(openBand.hiOpen);

  SlabInterval closedBand = projectOntoNormal(unitSquare(false), {1, 0});
  CHECK_FALSE(closedBand.loOpen);
  CHECK_FALSE(closedBand.hiOpen);
  CHECK(*closedBand.lo == 0);
  CHECK(*closedBand.hi == 1);
}

TEST_CASE("projection attainment looks inside partially open faces") {
  // Square whose horizontal edges are open, vertical edges closed: the
  // vertical faces lose their corners but keep their interiors.
  std::vector<HalfPlane> cs = {
      HalfPlane{{-1, 0}, 0, false}, HalfPlane{{1, 0}, 1, false},
      HalfPlane{{0, -1}, 0, true}, HalfPlane{{0, 1}, 1, true}};
  ConvexRegion r = ConvexRegion::fromConstraints(
      cs, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  SlabInterval band = projectOntoNormal(r, {0, 1});  // measures -x
  CHECK(*band.lo == -1);
  CHECK(*band.hi == 0);
  CHECK_FALSE(band.loOpen);
  CHECK_FALSE(band.hiOpen);

  // Cut the left face down to a single excluded corner: now unattained.
  ConvexRegion cut = r.clippedBy(HalfPlane{{-1, -1}, -1, false});  // x+y >= 1
  SlabInterval band2 = projectOntoNormal(cut, {0, 1});
  CHECK(*band2.hi == 0);
  CHECK(band2.hiOpen);

  ConvexRegion none = ConvexRegion::fromConstraints(
      {HalfPlane{{1, 0}, 0, true}, HalfPlane{{-1, 0}, 0, false}}, {{0, 0}});
  CHECK(none.isEmpty());
  CHECK_THROWS_AS(projectOntoNormal(none, {1, 0}), Error);
}

TEST_CASE("truncation by a slab") {
  ConvexRegion sq = unitSquare(false);
  SlabInterval slab;
  slab.direction = {1, 0};  // measures y
  slab.lo = Rational(1, 4);
  slab.hi = Rational(1, 2);
  slab.loOpen = false;
  slab.hiOpen = true;
  ConvexRegion band = truncate(sq, slab);
  CHECK(band.contains({Rational(1, 2), Rational(1, 4)}));
  CHECK(band.contains({Rational(1, 2), Rational(2, 5)}));
  CHECK_FALSE(band.contains({Rational(1, 2), Rational(1, 2)}));
  CHECK_FALSE(band.contains({Rational(1, 2), Rational(3, 4)}));
  CHECK_FALSE(band.contains({2, Rational(1, 3)}));
}

TEST_CASE("line clipping against regions") {
  ConvexRegion sq = unitSquare(false);
  LineClip lc = sq.clipLine({Rational(1, 2), Rational(1, 2)}, {1, 0});
  REQUIRE_FALSE(lc.empty);
  CHECK(lc.lo == Rational(-1, 2));
  CHECK(lc.hi == Rational(1, 2));
  CHECK_FALSE(lc.loOpen);
  CHECK_FALSE(lc.hiOpen);

  LineClip lo = unitSquare(true).clipLine({Rational(1, 2), Rational(1, 2)},
                                          {1, 0});
  REQUIRE_FALSE(lo.empty);
  CHECK(lo.loOpen);
  CHECK(lo.hiOpen);

  LineClip miss = sq.clipLine({5, 5}, {0, 1});
  CHECK(miss.empty);

  std::mt19937_64 rng(909);
  for (int i = 0; i < 300; ++i) {
    Point origin{randRational(rng, 3), randRational(rng, 3)};
    Vector dir{randRational(rng, 2), randRational(rng, 2)};
    if (dir.isZero()) continue;
    ConvexRegion region = (i % 2) ? unitSquare(true) : unitSquare(false);
    LineClip c = region.clipLine(origin, dir);
    for (int j = -4; j <= 4; ++j) {
      Rational s(j, 3);
      bool inInterval = false;
      if (!c.empty) {
        bool aboveLo = c.loOpen ? s > c.lo : s >= c.lo;
        bool belowHi = c.hiOpen ? s < c.hi : s <= c.hi;
        inInterval = aboveLo && belowHi;
      }
      CHECK(region.contains(origin + dir * s) == inInterval);
    }
  }
}

TEST_CASE("emptiness, representatives and snapping") {
  ConvexRegion empty = ConvexRegion::fromConstraints(
      {HalfPlane{{1, 0}, 0, true}, HalfPlane{{-1, 0}, 0, false},
       HalfPlane{{0, 1}, 1, false}, HalfPlane{{0, -1}, 1, false}},
      {{0, 0}});
  CHECK(empty.isEmpty());
  CHECK_FALSE(empty.representative().has_value());

  ConvexRegion seg = ConvexRegion::fromConstraints(
      {HalfPlane{{1, 0}, 0, false}, HalfPlane{{-1, 0}, 0, false},
       HalfPlane{{0, 1}, 1, false}, HalfPlane{{0, -1}, 1, false}},
      {{0, 0}});
  CHECK_FALSE(seg.isEmpty());
  auto p = seg.representative();
  REQUIRE(p.has_value());
  CHECK(p->x == 0);
  CHECK(seg.contains(*p));

  ConvexRegion tri = ConvexRegion::triangle({0, 0}, {7, 1}, {3, 9}, true);
  auto rep = tri.representative();
  REQUIRE(rep.has_value());
  CHECK(tri.contains(*rep));

  Point awkward{Rational(10000019, 30000057), Rational(9999991, 29999971)};
  auto snapped = snapInside(tri, awkward);
  REQUIRE(snapped.has_value());
  CHECK(tri.contains(*snapped));
  BigInt den = denominator(snapped->x) * denominator(snapped->y);
  CHECK(den <= (BigInt(1) << 24));

  ConvexRegion inter =
      tri.intersectWith(ConvexRegion::triangle({0, 0}, {7, 0}, {0, 7}, false));
  auto rep2 = inter.representative();
  REQUIRE(rep2.has_value());
  CHECK(tri.contains(*rep2));
}
