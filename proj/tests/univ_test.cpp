#include <algorithm>

#include "doctest.h"
#include "kanopt/univ.hpp"
#include "support.hpp"

using namespace kanopt;
using namespace kanopt::test;

namespace {

// Fixture B: one model included at the top of the two-point chain.
struct InclusionFixture {
  FinCategoryPtr D = chain2();
  FinCategoryPtr M =
      std::make_shared<const FinCategory>(make_category("M", {"m"}, {}));
  FinFunctor inf;

  InclusionFixture() {
    inf.name = "Inf";
    inf.source = M;
    inf.target = D;
    inf.obj_map = {ObjId{1}};
    inf.mor_map = {D->identity(ObjId{1})};
  }
};

// Fixture C: loss from a two-point chain into the bounded three-chain.
struct LossFixture {
  FinCategoryPtr phi = chain3();  // d0 < d1 < d2 read as bot < p < q
  FinCategoryPtr D = std::make_shared<const FinCategory>(make_category(
      "X", {"x1", "x2"}, {{"u", ObjId{0}, ObjId{1}}}));
  LossProblem L;

  LossFixture() {
    FinFunctor loss;
    loss.name = "Loss";
    loss.source = D;
    loss.target = phi;
    loss.obj_map = {ObjId{1}, ObjId{2}};
    loss.mor_map = {phi->identity(ObjId{1}), phi->identity(ObjId{2}),
                    *phi->find_morphism("g")};
    StrictErrorFunctor E;
    E.name = "E";
    E.category = phi;
    E.values = boolor_carrier();
    E.table.assign(phi->morphism_count(), rat(0));
    E.declared.assign(phi->morphism_count(), true);
    L.name = "C";
    L.domain = D;
    L.phi = phi;
    L.loss = loss;
    L.flavour = E;
    L.bottom = ObjId{0};
  }
};

}  // namespace

TEST_CASE("the identity functor is its own left adjoint") {
  const auto C = chain2();
  const auto adj = left_adjoint_via_comma(identity_functor(C));
  REQUIRE(adj);
  CHECK(same_behaviour(adj->left, identity_functor(C)));
  CHECK(verify_adjunction(*adj).ok());
}

TEST_CASE("the inclusion fixture has the documented left adjoint") {
  InclusionFixture fx;
  const auto adj = left_adjoint_via_comma(fx.inf);
  REQUIRE(adj);
  CHECK(adj->left.obj_map == std::vector<ObjId>{ObjId{0}, ObjId{0}});
  CHECK(adj->left.on(*fx.D->find_morphism("f")) == fx.M->identity(ObjId{0}));
  CHECK(adj->unit.at(ObjId{0}) == *fx.D->find_morphism("f"));
  CHECK(adj->unit.at(ObjId{1}) == fx.D->identity(ObjId{1}));
  CHECK(verify_adjunction(*adj).ok());
}

TEST_CASE("absent adjoints explain which comma category failed") {
  const auto disc = discrete_category(2);
  auto Mp = std::make_shared<const FinCategory>(make_category("M", {"m"}, {}));
  FinFunctor j;
  j.name = "j";
  j.source = Mp;
  j.target = disc;
  j.obj_map = {ObjId{1}};
  j.mor_map = {disc->identity(ObjId{1})};
  std::string why;
  CHECK(!left_adjoint_via_comma(j, {}, &why));
  CHECK(why == "comma category over d0 is empty");
}

TEST_CASE("verify_adjunction pinpoints broken data") {
  InclusionFixture fx;
  auto adj = *left_adjoint_via_comma(fx.inf);
  CHECK(verify_adjunction(adj).ok());

  auto broken = adj;
  broken.unit.components[0] = fx.D->identity(ObjId{0});
  const auto report = verify_adjunction(broken);
  REQUIRE(!report.ok());
  bool mentions_d0 = false;
  for (const auto& v : report.violations) {
    if (v.rule.find("d0") != std::string::npos ||
        v.witness.find("d0") != std::string::npos) {
      mentions_d0 = true;
    }
  }
  CHECK(mentions_d0);
}

TEST_CASE("adjoints minimise for every enumerated error") {
  InclusionFixture fx;
  const auto adj = *left_adjoint_via_comma(fx.inf);
  const auto pool = {rat(0), rat(1), rat(2)};
  for (std::uint32_t target = 0; target < fx.D->object_count(); ++target) {
    CatProblemTemplate tpl{fx.M, fx.D, fx.inf, ObjId{target}};
    LaxErrorEnumerator errors(fx.D, max_carrier(), pool);
    const auto report = check_error_independence(tpl, errors, adj);
    CHECK(report.checked > 0);
    CHECK(report.failures.empty());
  }
}

TEST_CASE("a wrong left functor is caught by the oracle") {
  // Chain M: m1 → m2 included at d1 → d2 of the 3-chain; target d0 prefers m1.
  const auto D = chain3();
  auto Mp = std::make_shared<const FinCategory>(make_category(
      "M", {"m1", "m2"}, {{"u", ObjId{0}, ObjId{1}}}));
  FinFunctor inf;
  inf.name = "Inf";
  inf.source = Mp;
  inf.target = D;
  inf.obj_map = {ObjId{1}, ObjId{2}};
  inf.mor_map = {D->identity(ObjId{1}), D->identity(ObjId{2}),
                 *D->find_morphism("g")};
  REQUIRE(validate_functor(inf).ok());

  CatErrorProblem P;
  P.name = "wrong";
  P.models = Mp;
  P.data = D;
  P.inf = inf;
  P.error = lax_error(D, max_carrier(), {rat(1), rat(1), rat(2)});
  P.target = ObjId{0};
  REQUIRE(validate_cat_problem(P).ok());
  CHECK(brute_force_minimisers_cat(P) == std::vector<ObjId>{ObjId{0}});

  const auto adj = *left_adjoint_via_comma(inf);
  CHECK(check_adjoint_minimises(P, adj));

  Adjunction wrong = adj;
  wrong.left = constant_functor("wrong", D, Mp, ObjId{1});
  CHECK(!check_adjoint_minimises(P, wrong));
}

TEST_CASE("empty error stream reports zero checks") {
  InclusionFixture fx;
  const auto adj = *left_adjoint_via_comma(fx.inf);
  CatProblemTemplate tpl{fx.M, fx.D, fx.inf, ObjId{0}};
  LaxErrorEnumerator empty(fx.D, max_carrier(), {});
  const auto report = check_error_independence(tpl, empty, adj);
  CHECK(report.checked == 0);
  CHECK(report.empty_stream);
  CHECK(report.failures.empty());
}

TEST_CASE("loss problems validate, including the bottom requirement") {
  LossFixture fx;
  CHECK(validate_loss_problem(fx.L).ok());

  auto bad = fx.L;
  bad.bottom = ObjId{1};  // p is not below bot
  CHECK(!validate_loss_problem(bad).ok());
}

TEST_CASE("kan lift of the loss fixture") {
  LossFixture fx;
  const auto lift = left_kan_lift(fx.L);
  REQUIRE(lift);
  CHECK(lift->lift_object == ObjId{0});
  CHECK(lift->eta == *fx.phi->find_morphism("f"));
}

TEST_CASE("kan lift is absent over a discrete domain with off-bottom images") {
  LossFixture fx;
  auto D2 = discrete_category(2);
  LossProblem L = fx.L;
  L.domain = D2;
  FinFunctor loss;
  loss.name = "Loss";
  loss.source = D2;
  loss.target = fx.phi;
  loss.obj_map = {ObjId{1}, ObjId{2}};
  loss.mor_map = {fx.phi->identity(ObjId{1}), fx.phi->identity(ObjId{2})};
  L.loss = loss;
  CHECK(!left_kan_lift(L));
}

TEST_CASE("kan lift over the terminal domain") {
  LossFixture fx;
  auto one = terminal_category();
  LossProblem L = fx.L;
  L.domain = one;
  FinFunctor loss = constant_functor("Loss", one, fx.phi, ObjId{1});
  L.loss = loss;
  const auto lift = left_kan_lift(L);
  REQUIRE(lift);
  CHECK(lift->lift_object == ObjId{0});
}

TEST_CASE("global loss minima") {
  LossFixture fx;
  CHECK(global_minima_loss(fx.L) == std::vector<ObjId>{ObjId{0}});

  auto constant = fx.L;
  constant.loss = constant_functor("Loss", fx.D, fx.phi, ObjId{1});
  CHECK(global_minima_loss(constant) ==
        std::vector<ObjId>{ObjId{0}, ObjId{1}});

  auto empty = fx.L;
  empty.domain = std::make_shared<const FinCategory>(
      make_category("empty", {}, {}));
  empty.loss.source = empty.domain;
  empty.loss.obj_map.clear();
  empty.loss.mor_map.clear();
  CHECK(global_minima_loss(empty).empty());
}

TEST_CASE("adjoints of loss land on the bottom's minimum") {
  LossFixture fx;
  const auto adj = left_adjoint_via_comma(fx.L.loss);
  REQUIRE(adj);
  CHECK(check_loss_adjoint_bottom(fx.L, *adj));

  // Identity loss: the bottom itself is the minimum.
  LossProblem idL = fx.L;
  idL.domain = fx.phi;
  idL.loss = identity_functor(fx.phi);
  const auto idadj = left_adjoint_via_comma(idL.loss);
  REQUIRE(idadj);
  CHECK(check_loss_adjoint_bottom(idL, *idadj));
  CHECK(global_minima_loss(idL) == std::vector<ObjId>{ObjId{0}});

  Adjunction wrong = *adj;
  wrong.left = constant_functor("wrong", fx.phi, fx.D, ObjId{1});
  CHECK(!check_loss_adjoint_bottom(fx.L, wrong));
}

TEST_CASE("lifts agree with global minima") {
  LossFixture fx;
  CHECK(check_lift_minimises(fx.L));

  // Absent lift: vacuously fine.
  auto D2 = discrete_category(2);
  LossProblem L = fx.L;
  L.domain = D2;
  FinFunctor loss;
  loss.name = "Loss";
  loss.source = D2;
  loss.target = fx.phi;
  loss.obj_map = {ObjId{1}, ObjId{2}};
  loss.mor_map = {fx.phi->identity(ObjId{1}), fx.phi->identity(ObjId{2})};
  L.loss = loss;
  CHECK(check_lift_minimises(L));
}

TEST_CASE("adjoints found by exhaustive search agree with the assembled one") {
  InclusionFixture fx;
  const auto assembled = *left_adjoint_via_comma(fx.inf);
  // Enumerate all candidate left functors and unit component choices and
  // keep those that verify; their object maps must match the assembled
  // adjoint up to inference-image equality.
  for (const auto& L : enumerate_functors(fx.D, fx.M)) {
    const auto RL = compose_functors(fx.inf, L);
    std::vector<std::vector<MorId>> unit_candidates;
    bool possible = true;
    for (std::uint32_t d = 0; d < fx.D->object_count() && possible; ++d) {
      auto cands = hom(*fx.D, ObjId{d}, RL.on(ObjId{d}));
      if (cands.empty()) possible = false;
      unit_candidates.push_back(std::move(cands));
    }
    if (!possible) continue;
    std::vector<std::uint32_t> pick(fx.D->object_count(), 0);
    while (true) {
      Adjunction A;
      A.left = L;
      A.right = fx.inf;
      A.unit.name = "unit";
      A.unit.from = identity_functor(fx.D);
      A.unit.to = RL;
      for (std::uint32_t d = 0; d < fx.D->object_count(); ++d) {
        A.unit.components.push_back(unit_candidates[d][pick[d]]);
      }
      A.counit.name = "counit";
      A.counit.from = compose_functors(L, fx.inf);
      A.counit.to = identity_functor(fx.M);
      A.counit.components = {fx.M->identity(ObjId{0})};
      if (verify_adjunction(A).ok()) {
        CHECK(A.left.obj_map == assembled.left.obj_map);
      }
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < unit_candidates[i].size()) break;
        pick[i] = 0;
      }
      A.unit.components.clear();
      if (i == pick.size()) break;
    }
  }
}
