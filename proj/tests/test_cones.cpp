#include "doctest.h"
#include "numvol/cones.hpp"
#include "numvol/errors.hpp"

using namespace numvol;

TEST_CASE("orthant is self dual") {
  auto c = PolyhedralCone::from_generators(2, {{1, 0}, {0, 1}});
  CHECK(c.facets().size() == 2);
  CHECK(c.dual().same_as(c));
}

TEST_CASE("redundant generators are dropped") {
  auto c = PolyhedralCone::from_generators(2, {{1, 0}, {1, 1}, {0, 1}, {2, 2}});
  CHECK(c.generators().size() == 2);
}

TEST_CASE("F1 effective cone dual") {
  auto psef = PolyhedralCone::from_generators(2, {{0, 1}, {1, -1}});
  auto movable = psef.dual();
  CHECK(movable.same_as(PolyhedralCone::from_generators(2, {{1, 0}, {1, 1}})));
  CHECK(movable.dual().same_as(psef));
}

TEST_CASE("degenerate cones are rejected") {
  CHECK_THROWS_WITH_AS(PolyhedralCone::from_generators(2, {{1, 0}, {2, 0}}), doctest::Contains("empty interior"),
                       ArgumentError);
  CHECK_THROWS_WITH_AS(PolyhedralCone::from_generators(2, {{1, 0}, {-1, 0}, {0, 1}}), doctest::Contains("not pointed"),
                       ArgumentError);
}

TEST_CASE("membership and interiority") {
  auto c = PolyhedralCone::from_generators(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}});
  CHECK(c.contains(RatVec{1, 1, 0}));
  CHECK(!c.is_interior(RatVec{1, 0, 0}));
  CHECK(c.is_interior(RatVec{2, 2, 1}));
  CHECK(!c.contains(RatVec{0, 0, -1}));
  CHECK(c.contains(Vec{1.0, 1.0, -1.0 - 1e-15}, 1e-12));
  CHECK(c.tight_facets(RatVec{0, 0, 0}).size() == c.facets().size());
}

TEST_CASE("sampling stays in the cone") {
  auto c = PolyhedralCone::from_generators(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}});
  auto interior = sample(c, 50, 7, SampleMode::Interior);
  for (const auto& p : interior.points) CHECK(c.is_interior(p));
  auto boundary = sample(c, 50, 7, SampleMode::Boundary);
  for (const auto& p : boundary.points) {
    CHECK(c.contains(p));
    CHECK(!c.is_interior(p));
  }
  auto again = sample(c, 50, 7, SampleMode::Interior);
  CHECK(again.points == interior.points);
}

TEST_CASE("rank one boundary sampling returns the ray") {
  auto c = PolyhedralCone::from_generators(1, {{1}});
  auto s = sample(c, 3, 1, SampleMode::Boundary);
  CHECK(s.rays_only);
}
