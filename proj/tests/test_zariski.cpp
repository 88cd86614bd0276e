#include <algorithm>

#include "doctest.h"
#include "numvol/errors.hpp"
#include "numvol/zariski.hpp"

using namespace numvol;

TEST_CASE("F1 decompositions") {
  auto f1 = catalog("F1");
  auto z = zariski_decompose(f1, RatVec{1, 1});
  CHECK(z.positive == RatVec{1, 0});
  REQUIRE(z.negative.size() == 1);
  CHECK(z.negative[0].first == "E");
  CHECK(z.negative[0].second == 1);
  auto nef = zariski_decompose(f1, RatVec{2, -1});
  CHECK(nef.positive == RatVec{2, -1});
  CHECK(nef.negative.empty());
  CHECK(zariski_volume(f1, RatVec{1, 1}) == 1);
  CHECK(zariski_volume(f1, RatVec{-1, 0}) == 0);
}

TEST_CASE("decomposition invariants on Bl3P2") {
  auto v = catalog("Bl3P2");
  auto pts = sample(v.psef, 30, 5, SampleMode::Interior);
  for (const auto& g : pts.points) {
    auto z = zariski_decompose(v, g);
    RatVec sum = z.positive;
    for (std::size_t k = 0; k < z.support.size(); ++k) {
      const auto& c = v.negative_curves[z.support[k]];
      CHECK(z.negative[k].second > 0);
      CHECK(dot(v.intersection.polar(z.positive), c.coords) == 0);
      for (int j = 0; j < v.rank; ++j) sum[j] += z.negative[k].second * c.coords[j];
    }
    CHECK(sum == g);
    CHECK(v.nef.contains(z.positive));
    CHECK(zariski_decompose(v, z.positive).negative.empty());
    auto fz = zariski_decompose(v, std::span<const double>(to_double(g)));
    for (int j = 0; j < v.rank; ++j)
      CHECK(fz.positive[j] == doctest::Approx(to_double(z.positive[j])).epsilon(1e-9));
  }
}

TEST_CASE("curve order does not matter") {
  auto v = catalog("Bl3P2");
  auto w = v;
  std::reverse(w.negative_curves.begin(), w.negative_curves.end());
  RatVec g{1, 2, 1, 3};
  CHECK(zariski_decompose(v, g).positive == zariski_decompose(w, g).positive);
}

TEST_CASE("zariski errors") {
  CHECK_THROWS_AS(zariski_decompose(catalog("P3"), RatVec{1}), ArgumentError);
  CHECK_THROWS_AS(zariski_decompose(catalog("F1"), RatVec{-1, 0}), ArgumentError);
  CHECK_THROWS_AS(check_trivial_decomposition(catalog("F1"), 10, 0), ArgumentError);
}

TEST_CASE("trivial decomposition under nef tangent bundle") {
  CHECK(check_trivial_decomposition(catalog("P2"), 100, 0));
  CHECK(check_trivial_decomposition(catalog("P1xP1"), 100, 0));
}

TEST_CASE("projection keeps vol_hat") {
  OptConfig c;
  c.starts = 4;
  auto f1 = catalog("F1");
  auto r = verify_projection_preserves_volhat(f1, {1, 1}, c);
  CHECK(r.positive_square == 1);
  CHECK(r.vol_hat_gamma == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.gap_positive <= 1e-6);
  auto e = verify_projection_preserves_volhat(f1, {0, 1}, c);
  CHECK(e.vol_hat_gamma == 0);
  CHECK(e.positive_square == 0);
}
