#include "doctest.h"
#include "numvol/errors.hpp"
#include "numvol/polytope.hpp"
#include "numvol/toric.hpp"

using namespace numvol;

TEST_CASE("polytope volume of a simplex and a square") {
  auto simplex = hpolytope_volume({{1, 0}, {0, 1}, {-1, -1}}, RatVec{0, 0, -1});
  CHECK(simplex.volume == Rational(1, 2));
  CHECK(simplex.vertex_count == 3);
  auto square = hpolytope_volume({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, RatVec{0, -2, 0, -3});
  CHECK(square.volume == 6);
  auto empty = hpolytope_volume({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, RatVec{1, 0, 0, -1});
  CHECK(empty.volume == 0);
  CHECK(empty.empty);
}

TEST_CASE("fan validation") {
  CHECK_NOTHROW(validate_fan(hirzebruch_fan(2)));
  ToricFan bad = projective_space_fan(2);
  bad.rays[2] = {-2, -2};
  CHECK_THROWS_AS(validate_fan(bad), InvariantError);
  ToricFan incomplete = projective_space_fan(2);
  incomplete.max_cones.pop_back();
  CHECK_THROWS_AS(validate_fan(incomplete), InvariantError);
}

TEST_CASE("fan text format") {
  auto fan = parse_fan("[fan]\ndim = 2\nrays = [[1,0],[0,1],[-1,1],[0,-1]]\nmax_cones = [[0,1],[1,2],[2,3],[3,0]]\n");
  CHECK(fan.rays.size() == 4);
  CHECK_THROWS_AS(parse_fan("[fan]\ndim = 2\nrays = [[1,0],[0,1]\n"), ParseError);
}

TEST_CASE("toric F1 reproduces the catalog") {
  RatVec d3{0, 0, 0, 1}, d1{0, 1, 0, 0};
  auto t = toric_variety(hirzebruch_fan(1), std::vector<RatVec>{d3, d1}, {"H", "E"}, "F1-fan");
  auto c = catalog("F1");
  CHECK(t.intersection == c.intersection);
  CHECK(t.nef.same_as(c.nef));
  CHECK(t.psef.same_as(c.psef));
  CHECK(t.oracle == VolumeOracle::ToricPolytope);
  CHECK(vol_big_toric(t, RatVec{1, 1}).value == 1);
  CHECK(vol_big_toric(t, RatVec{2, -1}).value == 3);
  auto outside = vol_big_toric(t, RatVec{0, -1});
  CHECK(outside.outside);
  CHECK(outside.value == 0);
}

TEST_CASE("toric P3 and Cutkosky tensors") {
  auto p3 = toric_variety(projective_space_fan(3));
  CHECK(p3.rank == 1);
  CHECK(p3.intersection.entry({0, 0, 0}) == 1);
  for (int d = 1; d <= 4; ++d) {
    RatVec taut{d, 0, 0, 1, 0};
    auto t = toric_variety(p2_bundle_fan(d + 1), std::vector<RatVec>{{1, 0, 0, 0, 0}, taut});
    CHECK(t.intersection == catalog("Cutkosky", {{"d", d}}).intersection);
  }
}

TEST_CASE("canonical lift is a representative of the class") {
  ToricModel m(hirzebruch_fan(2));
  RatVec coords{3, -1};
  auto a = m.lift(coords);
  CHECK(m.class_of(a) == coords);
  CHECK(m.lift(coords) == a);
}
