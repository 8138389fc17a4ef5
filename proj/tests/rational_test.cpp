#include "doctest.h"
#include "kanopt/rational.hpp"

using kanopt::Rational;

TEST_CASE("rationals canonicalise on construction") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(0, 7) == Rational{0});
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 2).den() == 2);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(kanopt::max(Rational{2}, Rational{3}) == Rational{3});
}

TEST_CASE("ordering is total and exact") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7, 3) > Rational{2});
  CHECK(Rational(2, 2) <= Rational{1});
}

TEST_CASE("parsing accepts p and p/q only") {
  CHECK(Rational::parse("3") == Rational{3});
  CHECK(Rational::parse("4/6") == Rational(2, 3));
  CHECK(!Rational::parse("0.5"));
  CHECK(!Rational::parse("-1"));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse(""));
  CHECK(Rational::parse("1/2")->str() == "1/2");
  CHECK(Rational::parse("6/3")->str() == "2");
}
