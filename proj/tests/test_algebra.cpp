#include "doctest.h"
#include "numvol/algebra.hpp"
#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"

using namespace numvol;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("7") == 7);
  CHECK(format_rational(Rational(4, 6)) == "2/3");
  CHECK(format_rational(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
}

TEST_CASE("distinct permutations") {
  CHECK(distinct_permutations({0, 0, 1}) == 3);
  CHECK(distinct_permutations({0, 1, 2}) == 6);
  CHECK(distinct_permutations({1, 1, 1}) == 1);
}

TEST_CASE("symmetric form on P1xP1 evaluates 2ab") {
  SymmetricForm f(2, 2, {{{0, 1}, 1}});
  CHECK(f.power(RatVec{3, 5}) == 30);
  std::vector<RatVec> args{{1, 0}, {0, 1}};
  CHECK(f.evaluate(args) == 1);
  CHECK(f.polar(RatVec{3, 5}) == RatVec{5, 3});
  CHECK(f.power(Vec{0.5, 2.0}) == doctest::Approx(2.0));
}

TEST_CASE("keys are canonicalized and conflicting duplicates rejected") {
  SymmetricForm f(3, 2, {{{1, 0, 0}, 1}, {{1, 1, 1}, 0}});
  CHECK(f.entry({0, 1, 0}) == 1);
  CHECK(f.entries().size() == 1);
  CHECK_THROWS_AS(SymmetricForm(3, 2, {{{1, 0, 0}, 1}, {{0, 0, 1}, 2}}), ArgumentError);
  CHECK_THROWS_AS(SymmetricForm(2, 2, {{{0, 2}, 1}}), ArgumentError);
}

TEST_CASE("contraction lowers the degree") {
  // Cutkosky(1) tensor.
  SymmetricForm f(3, 2, {{{0, 0, 1}, 1}, {{1, 1, 1}, 1}});
  RatVec beta{2, 1};
  auto c1 = power_contract(f, beta, 1);
  CHECK(c1.degree() == 2);
  CHECK(c1.power(beta) == f.power(beta));
  auto c2 = f.contract(beta, 2);
  RatVec e0{1, 0}, e1{0, 1};
  CHECK(c2.power(e0) == f.polar(beta)[0]);
  CHECK(c2.power(e1) == f.polar(beta)[1]);
}

TEST_CASE("exact linear algebra") {
  Matrix<Rational> a{{2, 1}, {1, 3}};
  CHECK(determinant(a) == 5);
  auto x = solve(a, RatVec{3, 4});
  REQUIRE(x);
  CHECK(*x == RatVec{1, 1});
  CHECK(!solve(Matrix<Rational>{{1, 2}, {2, 4}}, RatVec{1, 1}));
  CHECK(primitive(RatVec{Rational(2, 3), Rational(4, 3)}) == RatVec{1, 2});
}
