#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kanopt/error.hpp"
#include "kanopt/fincat.hpp"
#include "kanopt/validation.hpp"

namespace kanopt {

// An adjunction left ⊣ right with unit Id ⇒ right∘left and counit
// left∘right ⇒ Id, both triangle identities and the unique-factorisation
// property checkable by exhaustion.
struct Adjunction {
  FinFunctor left;
  FinFunctor right;
  FinNatTrans unit;
  FinNatTrans counit;
};

// Builds the left adjoint of R from initial objects of the comma
// categories d ↓ R. Returns nothing when some comma category lacks an
// initial object; `obstruction`, when supplied, says which d failed and
// why. The returned adjunction is fully verified before it is handed back.
std::optional<Adjunction> left_adjoint_via_comma(const FinFunctor& R,
                                                 Budget budget = {},
                                                 std::string* obstruction = nullptr);

ValidationReport verify_adjunction(const Adjunction& A);

bool check_adjoint_minimises(const CatErrorProblem& P, const Adjunction& A);

struct CatProblemTemplate {
  FinCategoryPtr models;
  FinCategoryPtr data;
  FinFunctor inf;
  ObjId target;
};

struct IndependenceReport {
  std::uint64_t checked = 0;
  std::vector<std::string> failures;
  bool empty_stream = false;
};

// Runs check_adjoint_minimises once per error drawn from the stream.
IndependenceReport check_error_independence(const CatProblemTemplate& tpl,
                                            LaxErrorEnumerator& errors,
                                            const Adjunction& A);

struct LossProblem {
  std::string name;
  FinCategoryPtr domain;  // D
  FinCategoryPtr phi;     // Φ
  FinFunctor loss;        // D → Φ
  ErrorFlavour flavour;   // on Φ
  ObjId bottom;           // object of Φ, flavoured-least

  bool operator==(const LossProblem& o) const;
};

ValidationReport validate_loss_problem(const LossProblem& L);

struct KanLiftResult {
  ObjId lift_object;  // object of the domain
  MorId eta;          // bottom → loss(lift_object) in Φ
};

// Left Kan lift of the bottom element through the loss functor: the first
// pair (x, e) such that every (d, g : bottom → loss(d)) factors through e
// by exactly one ε : x → d.
std::optional<KanLiftResult> left_kan_lift(const LossProblem& L,
                                           Budget budget = {});

// All x whose loss is flavoured-below the loss of every object.
std::vector<ObjId> global_minima_loss(const LossProblem& L);

bool check_loss_adjoint_bottom(const LossProblem& L, const Adjunction& A);
bool check_lift_minimises(const LossProblem& L, Budget budget = {});

}  // namespace kanopt
