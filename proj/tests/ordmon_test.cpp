#include "doctest.h"
#include "kanopt/ordmon.hpp"
#include "support.hpp"

using namespace kanopt;
using namespace kanopt::test;

TEST_CASE("builtin carriers validate with the expected flags") {
  const auto S = max_carrier();
  CHECK(validate_monoidal_preorder(*S).ok());
  CHECK(unit_is_bottom(*S));
  CHECK(is_positive_monoid(*S));

  const auto B = boolor_carrier();
  CHECK(validate_monoidal_preorder(*B).ok());
  CHECK(unit_is_bottom(*B));
  CHECK(is_positive_monoid(*B));
}

TEST_CASE("the two-element group is monotone but not positive") {
  const auto Z = z2_carrier();
  CHECK(validate_monoidal_preorder(*Z).ok());
  CHECK(!is_positive_monoid(*Z));
  CHECK(!unit_is_bottom(*Z));  // discrete order with two elements
}

TEST_CASE("tensor follows the carrier") {
  const auto S = max_carrier();
  CHECK(tensor(*S, rat(2), rat(3)) == rat(3));
  CHECK(tensor(*plus_carrier(), rat(1, 2), rat(1, 3)) == rat(5, 6));
  for (const auto& v : carrier_sample(*S)) {
    CHECK(tensor(*S, unit_value(*S), v) == v);
  }
  CHECK(tensor(*z2_carrier(), ErrorValue{"a"}, ErrorValue{"a"}) ==
        ErrorValue{"e"});
  CHECK_THROWS_AS(tensor(*S, ErrorValue{"a"}, rat(1)), UnknownElement);
  CHECK_THROWS_AS(tensor(*boolor_carrier(), rat(1, 2), rat(1)),
                  UnknownElement);
}

TEST_CASE("leq follows the carrier order") {
  const auto S = max_carrier();
  CHECK(leq(*S, rat(1), rat(2)));
  CHECK(!leq(*boolor_carrier(), rat(1), rat(0)));
  for (const auto& v : carrier_sample(*S)) CHECK(leq(*S, v, v));
  CHECK(!leq(*z2_carrier(), ErrorValue{"e"}, ErrorValue{"a"}));
}

TEST_CASE("positivity examples") {
  CHECK(is_positive_monoid(*plus_carrier()));
  CHECK(is_positive_monoid(*boolor_carrier()));
  CHECK(!is_positive_monoid(*z2_carrier()));
}

TEST_CASE("broken finite tables are reported, not accepted") {
  // Non-associative op.
  FiniteCarrier c;
  c.elements = {"u", "x"};
  c.unit = 0;
  c.op = {{0, 1}, {1, 1}};
  c.leq = {{true, true}, {false, true}};
  MonoidalPreorder S{"bad", MonoidalPreorder::Kind::finite, c};
  CHECK(validate_monoidal_preorder(S).ok());  // this one is in fact lawful

  // Break monotonicity: u ≤ x but x⊗x = x, u⊗x = x... use a 3-element
  // carrier where the order inverts under the product.
  FiniteCarrier d;
  d.elements = {"u", "x", "y"};
  d.unit = 0;
  d.op = {{0, 1, 2}, {1, 2, 1}, {2, 1, 2}};
  d.leq = {{true, true, true}, {false, true, true}, {false, false, true}};
  MonoidalPreorder T{"bad2", MonoidalPreorder::Kind::finite, d};
  const auto report = validate_monoidal_preorder(T);
  CHECK(!report.ok());
}

TEST_CASE("monotonicity and transitivity hold exhaustively on finite carriers") {
  for (const auto S : {z2_carrier()}) {
    const auto sample = carrier_sample(*S);
    for (const auto& a : sample) {
      for (const auto& a2 : sample) {
        if (!leq(*S, a, a2)) continue;
        for (const auto& b : sample) {
          for (const auto& b2 : sample) {
            if (!leq(*S, b, b2)) continue;
            CHECK(leq(*S, tensor(*S, a, b), tensor(*S, a2, b2)));
          }
        }
      }
    }
  }
}

TEST_CASE("monotonicity sampled on builtin carriers") {
  for (const auto S : {max_carrier(), plus_carrier(), boolor_carrier()}) {
    const auto sample = carrier_sample(*S);
    for (const auto& a : sample) {
      CHECK(leq(*S, unit_value(*S), a));  // unit is bottom
      for (const auto& a2 : sample) {
        if (!leq(*S, a, a2)) continue;
        for (const auto& b : sample) {
          CHECK(leq(*S, tensor(*S, a, b), tensor(*S, a2, b)));
          for (const auto& c : sample) {
            if (leq(*S, a2, c)) CHECK(leq(*S, a, c));  // transitivity
          }
        }
      }
    }
  }
}
