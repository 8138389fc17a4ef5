#include "kanopt/univ.hpp"

#include <algorithm>

namespace kanopt {

namespace {

bool contains(const std::vector<ObjId>& v, ObjId x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::optional<Adjunction> left_adjoint_via_comma(const FinFunctor& R,
                                                 Budget budget,
                                                 std::string* obstruction) {
  const auto M = R.source;
  const auto D = R.target;

  std::uint64_t work = 0;
  std::vector<ObjId> left_obj(D->object_count());
  std::vector<MorId> unit_comp(D->object_count());
  for (std::uint32_t d = 0; d < D->object_count(); ++d) {
    const auto K = comma_category(ObjId{d}, R);
    work += K.category->morphism_count() + 1;
    if (work > budget.limit) throw BudgetExceeded(work);
    if (K.category->object_count() == 0) {
      if (obstruction) {
        *obstruction = "comma category over " + D->objects[d] + " is empty";
      }
      return std::nullopt;
    }
    const auto init = initial_objects(*K.category);
    if (init.empty()) {
      if (obstruction) {
        *obstruction = "comma category over " + D->objects[d] +
                       " has no initial object";
      }
      return std::nullopt;
    }
    const auto [m0, f0] = K.object_labels[init.front().value];
    left_obj[d] = m0;
    unit_comp[d] = f0;
  }

  // Exactly one factorisation through the initial comma object exists for
  // each (m, f); a different count means the tables are inconsistent.
  auto factor = [&](ObjId d, ObjId m, MorId f) -> MorId {
    std::optional<MorId> found;
    for (const auto u : hom(*M, left_obj[d.value], m)) {
      if (compose(*D, R.on(u), unit_comp[d.value]) == f) {
        if (found) {
          throw NonFunctorialAssembly("factorisation through " +
                                      D->object_name(d) + " is not unique");
        }
        found = u;
      }
    }
    if (!found) {
      throw NonFunctorialAssembly("no factorisation through " +
                                  D->object_name(d));
    }
    return *found;
  };

  FinFunctor L;
  L.name = R.name + "_ladj";
  L.source = D;
  L.target = M;
  L.obj_map = left_obj;
  L.mor_map.resize(D->morphism_count());
  for (std::uint32_t g = 0; g < D->morphism_count(); ++g) {
    const auto& mg = D->mor(MorId{g});
    const auto f = compose(*D, unit_comp[mg.cod.value], MorId{g});
    L.mor_map[g] = factor(mg.dom, left_obj[mg.cod.value], f);
  }
  if (!validate_functor(L).ok()) {
    throw NonFunctorialAssembly("assembled left adjoint of " + R.name +
                                " is not functorial");
  }

  Adjunction A;
  A.left = L;
  A.right = R;
  A.unit.name = R.name + "_unit";
  A.unit.from = identity_functor(D);
  A.unit.to = compose_functors(R, L);
  A.unit.components = unit_comp;
  A.counit.name = R.name + "_counit";
  A.counit.from = compose_functors(L, R);
  A.counit.to = identity_functor(M);
  A.counit.components.resize(M->object_count());
  for (std::uint32_t m = 0; m < M->object_count(); ++m) {
    const auto rm = R.on(ObjId{m});
    A.counit.components[m] =
        factor(rm, ObjId{m}, D->identity(rm));
  }

  if (!verify_adjunction(A).ok()) {
    throw NonFunctorialAssembly("assembled adjunction for " + R.name +
                                " fails verification");
  }
  return A;
}

ValidationReport verify_adjunction(const Adjunction& A) {
  ValidationReport report;
  const auto& L = A.left;
  const auto& R = A.right;
  if (*L.source != *R.target || *L.target != *R.source) {
    report.add("adjoint endpoints mismatch", "");
    return report;
  }
  const auto& C = *L.source;  // domain of the left adjoint
  const auto& M = *L.target;

  report.merge(validate_functor(L), "left: ");
  report.merge(validate_functor(R), "right: ");

  if (!same_behaviour(A.unit.from, identity_functor(L.source))) {
    report.add("unit domain is not the identity functor", "");
  }
  if (!same_behaviour(A.unit.to, compose_functors(R, L))) {
    report.add("unit codomain is not right∘left", "");
  }
  if (!same_behaviour(A.counit.from, compose_functors(L, R))) {
    report.add("counit domain is not left∘right", "");
  }
  if (!same_behaviour(A.counit.to, identity_functor(R.source))) {
    report.add("counit codomain is not the identity functor", "");
  }
  report.merge(validate_nat_trans(A.unit), "unit: ");
  report.merge(validate_nat_trans(A.counit), "counit: ");
  if (!report.ok()) return report;

  for (std::uint32_t c = 0; c < C.object_count(); ++c) {
    const auto lc = L.on(ObjId{c});
    const auto lhs = M.composite(A.counit.at(lc), L.on(A.unit.at(ObjId{c})));
    if (!lhs || *lhs != M.identity(lc)) {
      report.add("zig-zag (counit∘L(unit)) at " + C.objects[c], "");
    }
  }
  for (std::uint32_t m = 0; m < M.object_count(); ++m) {
    const auto rm = R.on(ObjId{m});
    const auto lhs = C.composite(R.on(A.counit.at(ObjId{m})), A.unit.at(rm));
    if (!lhs || *lhs != C.identity(rm)) {
      report.add("zig-zag (R(counit)∘unit) at " + M.objects[m], "");
    }
  }

  // Unique factorisation: every f : c → R(m) equals R(u)∘unit_c for
  // exactly one u : L(c) → m.
  for (std::uint32_t c = 0; c < C.object_count(); ++c) {
    for (std::uint32_t m = 0; m < M.object_count(); ++m) {
      for (const auto f : hom(C, ObjId{c}, R.on(ObjId{m}))) {
        std::size_t count = 0;
        for (const auto u : hom(M, L.on(ObjId{c}), ObjId{m})) {
          const auto composite = C.composite(R.on(u), A.unit.at(ObjId{c}));
          if (composite && *composite == f) ++count;
        }
        if (count != 1) {
          report.add("universal factorisation",
                     "(" + C.objects[c] + ", " + M.objects[m] + ", " +
                         C.mor(f).name + ")");
        }
      }
    }
  }
  return report;
}

bool check_adjoint_minimises(const CatErrorProblem& P, const Adjunction& A) {
  return contains(brute_force_minimisers_cat(P), A.left.on(P.target));
}

IndependenceReport check_error_independence(const CatProblemTemplate& tpl,
                                            LaxErrorEnumerator& errors,
                                            const Adjunction& A) {
  IndependenceReport report;
  while (auto err = errors.next()) {
    CatErrorProblem P;
    P.name = err->name;
    P.models = tpl.models;
    P.data = tpl.data;
    P.inf = tpl.inf;
    P.error = std::move(*err);
    P.target = tpl.target;
    if (!check_adjoint_minimises(P, A)) {
      report.failures.push_back(P.error.name);
    }
    ++report.checked;
  }
  report.empty_stream = report.checked == 0;
  return report;
}

bool LossProblem::operator==(const LossProblem& o) const {
  return name == o.name && *domain == *o.domain && *phi == *o.phi &&
         loss == o.loss && flavour == o.flavour && bottom == o.bottom;
}

ValidationReport validate_loss_problem(const LossProblem& L) {
  ValidationReport report;
  report.merge(validate_category(*L.domain), "domain: ");
  report.merge(validate_category(*L.phi), "phi: ");
  if (*L.loss.source != *L.domain || *L.loss.target != *L.phi) {
    report.add("loss functor endpoints mismatch", L.name);
    return report;
  }
  report.merge(validate_functor(L.loss), "loss: ");

  const FinCategory* flavour_cat = std::visit(
      [](const auto& e) { return e.category.get(); }, L.flavour);
  if (*flavour_cat != *L.phi) {
    report.add("flavour not assigned on phi", L.name);
    return report;
  }
  if (std::holds_alternative<LaxErrorAssignment>(L.flavour)) {
    report.merge(validate_lax_error(std::get<LaxErrorAssignment>(L.flavour)),
                 "flavour: ");
  } else {
    try {
      report.merge(
          validate_strict_error(std::get<StrictErrorFunctor>(L.flavour)),
          "flavour: ");
    } catch (const PositivityRequired& e) {
      report.add("flavour: positivity required", e.what());
    }
  }
  if (L.bottom.value >= L.phi->object_count()) {
    report.add("bottom not an object of phi", L.name);
    return report;
  }
  if (!report.ok()) return report;
  for (std::uint32_t x = 0; x < L.phi->object_count(); ++x) {
    if (!flavoured_leq(L.flavour, L.bottom, ObjId{x})) {
      report.add("bottom not flavoured-least at " + L.phi->objects[x], "");
    }
  }
  return report;
}

std::optional<KanLiftResult> left_kan_lift(const LossProblem& L,
                                           Budget budget) {
  const auto& D = *L.domain;
  const auto& Phi = *L.phi;

  std::uint64_t pair_count = 0;
  for (std::uint32_t x = 0; x < D.object_count(); ++x) {
    pair_count += hom(Phi, L.bottom, L.loss.on(ObjId{x})).size();
  }
  std::uint64_t max_hom = 1;
  for (std::uint32_t x = 0; x < D.object_count(); ++x) {
    for (std::uint32_t y = 0; y < D.object_count(); ++y) {
      max_hom = std::max<std::uint64_t>(max_hom,
                                        hom(D, ObjId{x}, ObjId{y}).size());
    }
  }
  const auto estimate = sat_mul(sat_mul(pair_count, pair_count), max_hom);
  if (estimate > budget.limit) throw BudgetExceeded(estimate);

  for (std::uint32_t x = 0; x < D.object_count(); ++x) {
    for (const auto e : hom(Phi, L.bottom, L.loss.on(ObjId{x}))) {
      bool universal = true;
      for (std::uint32_t d = 0; d < D.object_count() && universal; ++d) {
        for (const auto g : hom(Phi, L.bottom, L.loss.on(ObjId{d}))) {
          std::size_t count = 0;
          for (const auto eps : hom(D, ObjId{x}, ObjId{d})) {
            const auto lifted = Phi.composite(L.loss.on(eps), e);
            if (lifted && *lifted == g) ++count;
          }
          if (count != 1) {
            universal = false;
            break;
          }
        }
      }
      if (universal) return KanLiftResult{ObjId{x}, e};
    }
  }
  return std::nullopt;
}

std::vector<ObjId> global_minima_loss(const LossProblem& L) {
  std::vector<ObjId> out;
  const auto n = static_cast<std::uint32_t>(L.domain->object_count());
  for (std::uint32_t x = 0; x < n; ++x) {
    bool least = true;
    for (std::uint32_t d = 0; d < n && least; ++d) {
      least = flavoured_leq(L.flavour, L.loss.on(ObjId{x}), L.loss.on(ObjId{d}));
    }
    if (least) out.push_back(ObjId{x});
  }
  return out;
}

bool check_loss_adjoint_bottom(const LossProblem& L, const Adjunction& A) {
  return contains(global_minima_loss(L), A.left.on(L.bottom));
}

bool check_lift_minimises(const LossProblem& L, Budget budget) {
  const auto lift = left_kan_lift(L, budget);
  if (!lift) return true;
  return contains(global_minima_loss(L), lift->lift_object);
}

}  // namespace kanopt
