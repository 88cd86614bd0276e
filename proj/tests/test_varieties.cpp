#include "doctest.h"
#include "numvol/errors.hpp"
#include "numvol/varieties.hpp"

using namespace numvol;

TEST_CASE("catalog entries carry consistent cones") {
  for (const char* name : {"P2", "P3", "P1xP1", "P1xP1xP1", "F1", "F2", "F3", "Bl1P2", "Bl2P2", "Bl3P2", "Cutkosky1"}) {
    auto v = catalog(name);
    CAPTURE(name);
    CHECK(v.mori.same_as(v.nef.dual()));
    CHECK(v.movable.same_as(v.psef.dual()));
    for (const auto& g : v.nef.generators()) CHECK(v.psef.contains(g));
  }
}

TEST_CASE("F1 numerical data") {
  auto v = catalog("F1");
  CHECK(v.intersection.power(RatVec{1, 0}) == 1);
  CHECK(v.intersection.power(RatVec{0, 1}) == -1);
  CHECK(v.negative_curves.size() == 1);
  CHECK(v.oracle == VolumeOracle::SurfaceZariski);
  CHECK(!v.nef_tangent_bundle);
  CHECK(pair(v, ClassVector::divisor({2, -1}), power_curve(v, {0, 1})) == 1);
}

TEST_CASE("Cutkosky parameter variants") {
  auto a = catalog("Cutkosky", {{"d", 3}});
  auto b = catalog("Cutkosky3");
  CHECK(a.intersection == b.intersection);
  CHECK(a.intersection.entry({1, 1, 1}) == 7);
  CHECK_THROWS_AS(catalog("Cutkosky", {{"d", 0}}), ArgumentError);
}

TEST_CASE("unknown catalog names list valid entries") {
  CHECK_THROWS_WITH_AS(catalog("P9x"), doctest::Contains("valid entries"), ArgumentError);
}

TEST_CASE("pairing rejects mismatched spaces") {
  auto v = catalog("P1xP1");
  CHECK_THROWS_AS(pair(v, ClassVector::curve({1, 1}), ClassVector::curve({1, 1})), ArgumentError);
  CHECK(pair(v, ClassVector::divisor({1, 2}), ClassVector::curve({3, 4})) == 11);
}

TEST_CASE("coordinate parsing reports the column") {
  CHECK(parse_coords("1, 2/3", 2) == RatVec{1, Rational(2, 3)});
  CHECK_THROWS_WITH(parse_coords("1,x", 2), doctest::Contains("2"));
  CHECK_THROWS(parse_coords("1,2,3", 2));
}

TEST_CASE("make_variety rejects nef outside psef") {
  VarietyData d;
  d.name = "bad";
  d.dim = 2;
  d.basis = {"H", "E"};
  d.intersection = {{{0, 0}, 1}, {{1, 1}, -1}};
  d.nef_generators = {{1, 0}, {1, -2}};
  d.psef_generators = {{0, 1}, {1, -1}};
  d.negative_curves = {{"E", {0, 1}}};
  CHECK_THROWS_WITH_AS(make_variety(d), doctest::Contains("violates psef facet"), InvariantError);
}

TEST_CASE("variety text round trip") {
  auto v = catalog("Bl2P2");
  auto text = serialize_variety(v);
  auto w = parse_variety(text);
  CHECK(w.intersection == v.intersection);
  CHECK(w.nef.same_as(v.nef));
  CHECK(w.psef.same_as(v.psef));
  CHECK(w.negative_curves == v.negative_curves);
  CHECK(serialize_variety(w) == text);
}

TEST_CASE("variety parse errors carry line numbers") {
  try {
    parse_variety("[variety]\nname = x\ndim = two\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_variety(""), ParseError);
  CHECK_THROWS_AS(parse_variety("[nonsense]\n"), ParseError);
}
