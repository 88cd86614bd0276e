#include <cmath>

#include "doctest.h"
#include "numvol/errors.hpp"
#include "numvol/optimize.hpp"
#include "numvol/varieties.hpp"

using namespace numvol;

namespace {

OptProblem nef_problem(const NumericalVariety& v, RatVec gamma) {
  return {v.nef, std::move(gamma), nef_polynomial_evaluator(v), static_cast<double>(v.dim), true};
}

OptConfig small_config(std::uint64_t seed = 0) {
  OptConfig c;
  c.starts = 4;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("P1xP1 ratio minimum matches the Lagrange value") {
  auto v = catalog("P1xP1");
  auto r = min_pairing_on_slice(nef_problem(v, {2, 3}), small_config());
  CHECK(r.value == doctest::Approx(std::sqrt(12.0)).epsilon(1e-9));
  CHECK(r.status == OptStatus::Converged);
  CHECK(r.kkt_gap <= 1e-8);
  // the minimizer has unit volume
  CHECK(2 * r.argmin[0] * r.argmin[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rank one cone gives the trivial ratio") {
  auto v = catalog("P3");
  auto r = min_pairing_on_slice(nef_problem(v, {1}), small_config());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero pairing with a generator is boundary_zero") {
  auto v = catalog("F1");
  auto r = min_pairing_on_slice(nef_problem(v, {0, -1}), small_config());
  CHECK(r.status == OptStatus::BoundaryZero);
  CHECK(r.value == 0);
  auto outside = min_pairing_on_slice(nef_problem(v, {-1, 0}), small_config());
  CHECK(outside.status == OptStatus::BoundaryZero);
  CHECK(outside.value == 0);
}

TEST_CASE("identical seeds give identical results") {
  auto v = catalog("Bl2P2");
  auto p = nef_problem(v, {3, 1, 1});
  auto a = min_pairing_on_slice(p, small_config(7));
  auto b = min_pairing_on_slice(p, small_config(7));
  CHECK(a.value == b.value);
  CHECK(a.argmin == b.argmin);
  CHECK(a.iterations == b.iterations);
  CHECK(a.kkt_gap == b.kkt_gap);
}

TEST_CASE("accepted steps never increase the objective") {
  auto v = catalog("Cutkosky", {{"d", 2}});
  std::map<int, double> last;
  bool monotone = true;
  int steps = 0;
  auto observer = [&](int start, double f) {
    auto it = last.find(start);
    if (it != last.end() && f > it->second + 1e-15) monotone = false;
    last[start] = f;
    ++steps;
  };
  min_pairing_on_slice(nef_problem(v, {2, 5}), small_config(), observer);
  CHECK(steps > 0);
  CHECK(monotone);
}

TEST_CASE("ratio is scale invariant") {
  auto v = catalog("Cutkosky", {{"d", 1}});
  RatVec gamma{1, 3};
  auto ev = nef_polynomial_evaluator(v);
  Vec beta{0.7, 1.3};
  auto ratio = [&](const Vec& b) { return (b[0] * 1 + b[1] * 3) / std::cbrt(ev.value(b)); };
  for (double lambda : {1e-3, 0.5, 2.0, 1e3}) {
    Vec scaled{lambda * beta[0], lambda * beta[1]};
    CHECK(std::abs(ratio(scaled) - ratio(beta)) <= 1e-12 * ratio(beta));
  }
}

TEST_CASE("optimizer is not beaten by sampled points") {
  auto v = catalog("Bl3P2");
  RatVec gamma{4, 1, 1, 1};
  auto r = min_pairing_on_slice(nef_problem(v, gamma), small_config());
  auto pts = sample(v.nef, 200, 11, SampleMode::Interior);
  double best = INFINITY;
  for (const auto& b : pts.points) {
    Vec d = to_double(b);
    double pairing = 0;
    for (std::size_t i = 0; i < d.size(); ++i) pairing += d[i] * to_double(gamma[i]);
    best = std::min(best, pairing / std::sqrt(v.intersection.power(std::span<const double>(d))));
  }
  CHECK(best >= r.value - 1e-8);
}

TEST_CASE("oracle evaluator uses finite differences") {
  auto v = catalog("F1");
  OptProblem p{v.psef, {1, 0}, big_volume_evaluator(v), 2.0, false};
  auto r = min_pairing_on_slice(p, small_config());
  // inf of <β, H-curve> over unit volume psef β is reached at β = H
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nef-only varieties have no big volume evaluator") {
  auto v = catalog("F1");
  v.oracle = VolumeOracle::NefOnly;
  CHECK_THROWS_AS(big_volume_evaluator(v), NefOnlyError);
}

TEST_CASE("interior optimum certificate") {
  auto v = catalog("P1xP1");
  Vec beta{0.5, 0.5};
  CHECK(certify_interior_optimum(v, beta, {1, 1}, 1e-9));
  CHECK_FALSE(certify_interior_optimum(v, beta, {1, 4}, 1e-3));
  auto p2 = catalog("P2");
  CHECK(certify_interior_optimum(p2, Vec{3.0}, {5}, 0.0));
}

TEST_CASE("simplex projection") {
  auto p = project_simplex(Vec{0.2, 0.2, 0.2});
  CHECK(p[0] == doctest::Approx(1.0 / 3));
  auto q = project_simplex(Vec{2.0, -1.0});
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(0.0));
}
