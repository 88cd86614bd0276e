#include <cmath>

#include "doctest.h"
#include "numvol/divisor_volume.hpp"
#include "numvol/errors.hpp"
#include "numvol/toric.hpp"

using namespace numvol;

namespace {

OptConfig quick() {
  OptConfig c;
  c.starts = 4;
  return c;
}

}  // namespace

TEST_CASE("volume of nef and big classes") {
  auto c1 = catalog("Cutkosky", {{"d", 1}});
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      // a·π*H + b·(π*H+L) has coordinates (a+b, b) in the basis (π*H, L)
      auto r = vol(c1, RatVec{a + b, b});
      CHECK(r.value == Rational(b * b * b + 3 * (a + b) * (a + b) * b));
    }
  auto f1 = catalog("F1");
  auto big = vol(f1, RatVec{1, 1});
  CHECK(big.value == 1);
  CHECK(big.method == "oracle:surface-zariski");
  auto nef = vol(f1, RatVec{2, -1});
  CHECK(nef.value == 3);
  CHECK(nef.method == "tensor");
  CHECK(vol(f1, RatVec{0, 0}).value == 0);
  auto outside = vol(f1, RatVec{-1, 0});
  CHECK(outside.value == 0);
  CHECK(outside.method == "outside-psef");
  CHECK(vol(f1, Vec{1.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("toric oracle volume") {
  // rays 3 and 1 of the Hirzebruch fan are the classes H and E
  RatVec h{0, 0, 0, 1}, e{0, 1, 0, 0};
  auto fan = toric_variety(hirzebruch_fan(1), std::vector<RatVec>{h, e}, {"H", "E"}, "F1-fan");
  auto f1 = catalog("F1");
  for (const RatVec& a : {RatVec{1, 1}, RatVec{3, 2}, RatVec{2, -1}, RatVec{1, 5}}) {
    auto r = vol(fan, a);
    CHECK(r.value == vol(f1, a).value);
    if (!fan.nef.contains(a)) CHECK(r.method == "oracle:toric-polytope");
  }
}

TEST_CASE("nef-only error names the class and variety") {
  auto v = catalog("F1");
  v.oracle = VolumeOracle::NefOnly;
  CHECK_THROWS_WITH_AS(vol(v, RatVec{1, 1}), doctest::Contains("F1"), NefOnlyError);
  CHECK_THROWS_WITH_AS(vol(v, RatVec{1, 1}), doctest::Contains("1,1"), NefOnlyError);
  CHECK(vol(v, RatVec{2, -1}).value == 3);
  CHECK_THROWS_AS(m_invariant(v, {1, 0}, quick()), NefOnlyError);
}

TEST_CASE("M invariant examples") {
  auto p2 = catalog("P2");
  CHECK(m_invariant(p2, {3}, quick()).value == doctest::Approx(9.0).epsilon(1e-9));
  auto q = catalog("P1xP1");
  auto m = m_invariant(q, {2, 5}, quick());
  CHECK(m.value == doctest::Approx(20.0).epsilon(1e-6));
  CHECK_FALSE(m.upper_bound);
  auto slice = m_invariant_nef_slice(q, {2, 5}, quick());
  CHECK(slice.upper_bound);
  CHECK(slice.value == doctest::Approx(20.0).epsilon(1e-6));
}

TEST_CASE("M invariant on F1 against a grid over the psef slice") {
  auto f1 = catalog("F1");
  RatVec gamma{3, 1};
  auto m = m_invariant(f1, gamma, quick());
  // psef = cone(E, H-E); scan unit-volume classes t·E + s·(H-E)
  double best = INFINITY;
  for (int i = 0; i <= 4000; ++i) {
    double t = i / 4000.0;
    Vec beta{1 - t, -(1 - t) + t};
    double v = vol(f1, beta);
    if (v <= 0) continue;
    best = std::min(best, (3 * beta[0] + beta[1]) / std::sqrt(v));
  }
  CHECK(m.value == doctest::Approx(best * best).epsilon(1e-5));
}

TEST_CASE("duality value equals the volume") {
  auto p2 = catalog("P2");
  auto r = vol_via_duality(p2, {2}, quick());
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-6));
  auto f1 = catalog("F1");
  auto d = vol_via_duality(f1, {2, -1}, quick());
  CHECK(d.reference == 3);
  CHECK(std::abs(d.value - 3) <= 3e-3);
  auto zero = vol_via_duality(f1, {-1, 0}, quick());
  CHECK(zero.value == 0);
  CHECK(zero.status == OptStatus::BoundaryZero);
}
