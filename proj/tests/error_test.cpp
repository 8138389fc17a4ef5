#include <algorithm>

#include "doctest.h"
#include "kanopt/error.hpp"
#include "support.hpp"

using namespace kanopt;
using namespace kanopt::test;

namespace {

SetErrorProblem fixture_a_problem() {
  SetErrorProblem P;
  P.name = "A";
  P.models = {"m1", "m2"};
  P.data = {"d0", "d1", "d2"};
  P.inf = {1, 2};
  P.fill = Rational{9};
  P.err.assign(3, std::vector<Rational>(3, P.fill));
  for (int i = 0; i < 3; ++i) P.err[i][i] = Rational{0};
  P.err[0][1] = Rational{1};
  P.err[0][2] = Rational{2};
  P.target = 0;
  return P;
}

}  // namespace

TEST_CASE("lax validation: identities and composites") {
  const auto S = max_carrier();
  auto E = lax_error(chain2(), S, {rat(2)});
  CHECK(validate_lax_error(E).ok());

  // 3-chain with max(2,3) = 3 ≤ 3 on the composite.
  auto E3 = lax_error(chain3(), S, {rat(3), rat(2), rat(3)});
  CHECK(validate_lax_error(E3).ok());

  auto bad = lax_error(chain3(), S, {rat(3), rat(2), rat(1)});
  const auto report = validate_lax_error(bad);
  REQUIRE(!report.ok());
  CHECK(report.violations.front().rule == "laxity");
  CHECK(report.violations.front().witness == "(g, f)");
}

TEST_CASE("lax validation requires a bottom unit") {
  auto E = lax_error(chain2(), z2_carrier(),
                     {ErrorValue{"e"}});
  const auto report = validate_lax_error(E);
  REQUIRE(!report.ok());
  CHECK(report.violations.front().rule ==
        "carrier unit is not the bottom element");
}

TEST_CASE("strict validation: exact functor laws over a positive carrier") {
  const auto B = boolor_carrier();
  StrictErrorFunctor E;
  E.name = "E";
  E.category = chain3();
  E.values = B;
  E.table.assign(E.category->morphism_count(), rat(0));
  E.declared.assign(E.category->morphism_count(), true);
  CHECK(validate_strict_error(E).ok());  // constant unit

  // f ↦ 1, g ↦ 0, gf ↦ 1 is multiplicative over or.
  E.table[E.category->find_morphism("f")->value] = rat(1);
  E.table[E.category->find_morphism("h")->value] = rat(1);
  CHECK(validate_strict_error(E).ok());

  E.table[E.category->find_morphism("g")->value] = rat(1);
  E.table[E.category->find_morphism("h")->value] = rat(0);
  CHECK(!validate_strict_error(E).ok());

  StrictErrorFunctor Z;
  Z.name = "Z";
  Z.category = chain2();
  Z.values = z2_carrier();
  Z.table.assign(Z.category->morphism_count(), ErrorValue{"e"});
  Z.declared.assign(Z.category->morphism_count(), true);
  CHECK_THROWS_AS(validate_strict_error(Z), PositivityRequired);
}

TEST_CASE("error comparison on object pairs") {
  // Only f : a → b (value 2) and g : c → e (value 1).
  auto C = std::make_shared<const FinCategory>(
      make_category("twoarrow", {"a", "b", "c", "e"},
                    {{"f", ObjId{0}, ObjId{1}}, {"g", ObjId{2}, ObjId{3}}}));
  auto E = lax_error(C, max_carrier(), {rat(2), rat(1)});
  REQUIRE(validate_lax_error(E).ok());

  CHECK(error_leq_pairs(E, {ObjId{0}, ObjId{1}}, {ObjId{0}, ObjId{1}}));
  CHECK(error_leq_pairs(E, {ObjId{2}, ObjId{3}}, {ObjId{0}, ObjId{1}}));
  CHECK(!error_leq_pairs(E, {ObjId{0}, ObjId{1}}, {ObjId{2}, ObjId{3}}));
  // Empty hom on the right: vacuous.
  CHECK(error_leq_pairs(E, {ObjId{0}, ObjId{1}}, {ObjId{1}, ObjId{0}}));
}

TEST_CASE("the comparison is a preorder, and the checker notices broken doubles") {
  auto E = lax_error(chain3(), max_carrier(), {rat(1), rat(2), rat(2)});
  REQUIRE(validate_lax_error(E).ok());
  CHECK(check_comparison_preorder(E).ok());

  auto Eb = lax_error(chain2(), max_carrier(), {rat(2)});
  CHECK(check_comparison_preorder(Eb).ok());

  // Inject a relation that is not transitive; the checker must name a triple.
  const auto broken = [](const LaxErrorAssignment& e,
                         std::pair<ObjId, ObjId> a,
                         std::pair<ObjId, ObjId> b) {
    if (a == b) return true;
    // arbitrary non-transitive relation on pair indices
    const auto ai = a.first.value * e.category->object_count() + a.second.value;
    const auto bi = b.first.value * e.category->object_count() + b.second.value;
    return bi == ai + 1;
  };
  const auto report = check_comparison_preorder(E, broken);
  REQUIRE(!report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.rule == "comparison not transitive") found = true;
  }
  CHECK(found);
}

TEST_CASE("brute-force set minimisers") {
  auto P = fixture_a_problem();
  auto result = brute_force_minimisers_set(P);
  CHECK(result.minimisers == std::vector<std::uint32_t>{0});
  CHECK(result.error == Rational{1});

  P.target = 1;  // in the image: error floor 0
  result = brute_force_minimisers_set(P);
  CHECK(result.minimisers == std::vector<std::uint32_t>{0});
  CHECK(result.error == Rational{0});

  P.target = 0;
  P.err[0][2] = Rational{1};  // tie
  result = brute_force_minimisers_set(P);
  CHECK(result.minimisers == std::vector<std::uint32_t>{0, 1});

  SetErrorProblem empty;
  empty.name = "empty";
  empty.data = {"d0"};
  empty.err = {{Rational{0}}};
  empty.fill = Rational{1};
  const auto none = brute_force_minimisers_set(empty);
  CHECK(none.empty_model_space);
  CHECK(none.minimisers.empty());
}

TEST_CASE("brute-force categorical minimisers") {
  // Fixture B: single model.
  const auto D = chain2();
  auto Mp = std::make_shared<const FinCategory>(make_category("M", {"m"}, {}));
  CatErrorProblem P;
  P.name = "B";
  P.models = Mp;
  P.data = D;
  P.inf.name = "Inf";
  P.inf.source = Mp;
  P.inf.target = D;
  P.inf.obj_map = {ObjId{1}};
  P.inf.mor_map = {D->identity(ObjId{1})};
  P.error = lax_error(D, max_carrier(), {rat(2)});
  P.target = ObjId{0};
  REQUIRE(validate_cat_problem(P).ok());
  CHECK(brute_force_minimisers_cat(P) == std::vector<ObjId>{ObjId{0}});

  // Second model sitting exactly on the target wins through its identity.
  auto M2 = std::make_shared<const FinCategory>(
      make_category("M2", {"m", "mp"}, {}));
  CatErrorProblem Q = P;
  Q.models = M2;
  Q.inf.source = M2;
  Q.inf.obj_map = {ObjId{1}, ObjId{0}};
  Q.inf.mor_map = {D->identity(ObjId{1}), D->identity(ObjId{0})};
  CHECK(brute_force_minimisers_cat(Q) == std::vector<ObjId>{ObjId{1}});

  // No morphisms out of the target: everything is vacuously minimal.
  CatErrorProblem R = Q;
  R.target = ObjId{1};
  CHECK(brute_force_minimisers_cat(R) ==
        std::vector<ObjId>{ObjId{0}, ObjId{1}});
}

TEST_CASE("lax error enumeration matches by-hand counts") {
  const auto C = chain2();
  const auto S = max_carrier();
  CHECK(enumerate_lax_errors(C, S, {rat(0), rat(1)}).size() == 2);
  CHECK(enumerate_lax_errors(C, S, {rat(0)}).size() == 1);
  CHECK(enumerate_lax_errors(C, S, {}).empty());
  for (const auto& E : enumerate_lax_errors(C, S, {rat(0), rat(1), rat(2)})) {
    CHECK(validate_lax_error(E).ok());
  }
  CHECK_THROWS_AS(
      enumerate_lax_errors(chain3(), S,
                           {rat(0), rat(1), rat(2), rat(3), rat(4)},
                           Budget{20}),
      BudgetExceeded);
}

TEST_CASE("flavoured comparison") {
  const auto B = boolor_carrier();
  StrictErrorFunctor E;
  E.name = "E";
  E.category = chain3();
  E.values = B;
  E.table.assign(E.category->morphism_count(), rat(0));
  E.declared.assign(E.category->morphism_count(), true);
  CHECK(flavoured_leq(E, ObjId{0}, ObjId{0}));
  CHECK(flavoured_leq(E, ObjId{0}, ObjId{2}));
  CHECK(!flavoured_leq(E, ObjId{2}, ObjId{0}));

  // The only morphism x → y valued 1: no unit witness.
  StrictErrorFunctor F = E;
  F.category = chain2();
  F.table.assign(F.category->morphism_count(), rat(0));
  F.declared.assign(F.category->morphism_count(), true);
  F.table[F.category->find_morphism("f")->value] = rat(1);
  CHECK(!flavoured_leq(F, ObjId{0}, ObjId{1}));

  auto L = lax_error(chain2(), max_carrier(), {rat(0)});
  CHECK(flavoured_leq(L, ObjId{0}, ObjId{1}));
  L.table[L.category->find_morphism("f")->value] = rat(1);
  CHECK(!flavoured_leq(L, ObjId{0}, ObjId{1}));
}

TEST_CASE("laxity extends to chains of three composites") {
  const auto S = max_carrier();
  for (const auto& E :
       enumerate_lax_errors(chain3(), S, {rat(0), rat(1), rat(2)})) {
    const auto& C = *E.category;
    for (std::uint32_t h = 0; h < C.morphism_count(); ++h) {
      for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
        if (!C.composable(MorId{h}, MorId{g})) continue;
        for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
          if (!C.composable(MorId{g}, MorId{f})) continue;
          const auto hg = *C.composite(MorId{h}, MorId{g});
          const auto hgf = *C.composite(hg, MorId{f});
          const auto bound = tensor(
              *S, E.at(MorId{h}),
              tensor(*S, E.at(MorId{g}), E.at(MorId{f})));
          CHECK(leq(*S, bound, E.at(hgf)));
        }
      }
    }
  }
}

TEST_CASE("order-embeddings of the carrier preserve argmin sets") {
  const auto P = fixture_a_problem();
  const auto base = brute_force_minimisers_set(P).minimisers;
  const auto embeddings = {
      +[](const Rational& r) { return r * r; },
      +[](const Rational& r) { return r * Rational{2}; },
      +[](const Rational& r) {  // x / (1 + x)
        return Rational(r.num(), r.num() + r.den());
      },
  };
  for (const auto embed : embeddings) {
    auto Q = P;
    Q.fill = embed(P.fill);
    for (auto& row : Q.err) {
      for (auto& v : row) v = embed(v);
    }
    CHECK(brute_force_minimisers_set(Q).minimisers == base);
  }
}

TEST_CASE("composites at the unit force the comparison downstream") {
  // For strict errors, E(hg) = unit forces E(h) = unit by positivity.
  const auto B = boolor_carrier();
  StrictErrorFunctor E;
  E.name = "E";
  E.category = chain3();
  E.values = B;
  E.table.assign(E.category->morphism_count(), rat(0));
  E.declared.assign(E.category->morphism_count(), true);
  REQUIRE(validate_strict_error(E).ok());
  const auto& C = *E.category;
  const auto unit = unit_value(*B);
  for (std::uint32_t h = 0; h < C.morphism_count(); ++h) {
    for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
      if (!C.composable(MorId{h}, MorId{g})) continue;
      const auto hg = *C.composite(MorId{h}, MorId{g});
      if (E.at(hg) != unit) continue;
      CHECK(flavoured_leq(E, C.mor(MorId{h}).dom, C.mor(MorId{h}).cod));
    }
  }
}
