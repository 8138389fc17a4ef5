#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kanopt/fincat.hpp"
#include "kanopt/ordmon.hpp"
#include "kanopt/rational.hpp"
#include "kanopt/validation.hpp"

namespace kanopt {

// Assignment of error values to the morphisms of a category, lax in the
// sense that tensor(E(g), E(f)) ≤ E(gf) for every composable pair, with
// identities bounded below by the unit. Requires the unit of the value
// algebra to be its bottom element.
struct LaxErrorAssignment {
  std::string name;
  FinCategoryPtr category;
  MonoidalPreorderPtr values;
  std::vector<ErrorValue> table;  // indexed by morphism
  std::vector<bool> declared;     // parser totality bookkeeping

  const ErrorValue& at(MorId m) const { return table[m.value]; }
  bool operator==(const LaxErrorAssignment& o) const;
};

// Exact companion: identities map to the unit and composites map to the
// tensor of their factors, over a positive carrier.
struct StrictErrorFunctor {
  std::string name;
  FinCategoryPtr category;
  MonoidalPreorderPtr values;
  std::vector<ErrorValue> table;
  std::vector<bool> declared;

  const ErrorValue& at(MorId m) const { return table[m.value]; }
  bool operator==(const StrictErrorFunctor& o) const;
};

using ErrorFlavour = std::variant<LaxErrorAssignment, StrictErrorFunctor>;

struct SetErrorProblem {
  std::string name;
  std::vector<std::string> models;
  std::vector<std::string> data;
  std::vector<std::uint32_t> inf;        // model index → data index
  std::vector<std::vector<Rational>> err;  // dense data × data
  Rational fill;
  std::uint32_t target = 0;

  bool operator==(const SetErrorProblem&) const = default;
};

struct CatErrorProblem {
  std::string name;
  FinCategoryPtr models;
  FinCategoryPtr data;
  FinFunctor inf;
  LaxErrorAssignment error;
  ObjId target;
};

ValidationReport validate_lax_error(const LaxErrorAssignment& E);
// Throws PositivityRequired when the carrier is not a positive monoid.
ValidationReport validate_strict_error(const StrictErrorFunctor& E);
ValidationReport validate_set_problem(const SetErrorProblem& P);
ValidationReport validate_cat_problem(const CatErrorProblem& P);

// (src) ≤ (dst) in the induced comparison: every morphism between the dst
// pair is matched by one between the src pair of no greater error.
// Vacuously true when the dst hom-set is empty.
bool error_leq_pairs(const LaxErrorAssignment& E, std::pair<ObjId, ObjId> src,
                     std::pair<ObjId, ObjId> dst);

using PairRelation = std::function<bool(
    const LaxErrorAssignment&, std::pair<ObjId, ObjId>, std::pair<ObjId, ObjId>)>;

// Checks reflexivity and transitivity of the comparison over all object
// pairs. The relation is injectable so the harness can prove the check
// itself trips on a broken comparison.
ValidationReport check_comparison_preorder(const LaxErrorAssignment& E,
                                           const PairRelation& rel = {});

struct SetMinimiserResult {
  std::vector<std::uint32_t> minimisers;  // model indices, declaration order
  std::optional<Rational> error;          // attained minimum
  bool empty_model_space = false;
};

SetMinimiserResult brute_force_minimisers_set(const SetErrorProblem& P);
std::vector<ObjId> brute_force_minimisers_cat(const CatErrorProblem& P);

bool flavoured_leq(const StrictErrorFunctor& E, ObjId x, ObjId y);
bool flavoured_leq(const LaxErrorAssignment& E, ObjId x, ObjId y);
bool flavoured_leq(const ErrorFlavour& E, ObjId x, ObjId y);

// Streams every table over the pool that validates, identities pinned to
// the unit. An empty pool yields an empty stream.
class LaxErrorEnumerator {
 public:
  LaxErrorEnumerator(FinCategoryPtr category, MonoidalPreorderPtr values,
                     std::vector<ErrorValue> pool, Budget budget = {});
  std::uint64_t estimate() const { return estimate_; }
  std::optional<LaxErrorAssignment> next();

 private:
  FinCategoryPtr category_;
  MonoidalPreorderPtr values_;
  std::vector<ErrorValue> pool_;
  std::uint64_t estimate_ = 0;
  bool done_ = false;
  bool fresh_ = true;
  std::vector<std::uint32_t> choice_;  // per non-identity morphism
  std::size_t emitted_ = 0;
};

std::vector<LaxErrorAssignment> enumerate_lax_errors(
    FinCategoryPtr category, MonoidalPreorderPtr values,
    const std::vector<ErrorValue>& pool, Budget budget = {});

}  // namespace kanopt
