#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kanopt/validation.hpp"

namespace kanopt {

struct ObjId {
  std::uint32_t value = 0;
  auto operator<=>(const ObjId&) const = default;
};

struct MorId {
  std::uint32_t value = 0;
  auto operator<=>(const MorId&) const = default;
};

struct Morphism {
  std::string name;
  ObjId dom;
  ObjId cod;
  bool operator==(const Morphism&) const = default;
};

// Finite category with explicit tables. Identity morphisms are generated
// automatically under the reserved names id_<object> and occupy the first
// object_count() slots of the morphism list, so identity(x).value == x.value.
// comp[g][f] holds the composite g∘f, or no_entry when the table has no
// entry for the pair.
struct FinCategory {
  static constexpr std::uint32_t no_entry = 0xffffffffu;

  std::string name;
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<std::vector<std::uint32_t>> comp;

  std::size_t object_count() const { return objects.size(); }
  std::size_t morphism_count() const { return morphisms.size(); }
  bool is_identity(MorId m) const { return m.value < objects.size(); }
  MorId identity(ObjId x) const { return MorId{x.value}; }
  const Morphism& mor(MorId m) const { return morphisms[m.value]; }
  const std::string& object_name(ObjId x) const { return objects[x.value]; }
  bool composable(MorId g, MorId f) const {
    return mor(f).cod == mor(g).dom;
  }
  std::optional<MorId> composite(MorId g, MorId f) const {
    auto e = comp[g.value][f.value];
    if (e == no_entry) return std::nullopt;
    return MorId{e};
  }
  std::optional<ObjId> find_object(std::string_view n) const;
  std::optional<MorId> find_morphism(std::string_view n) const;

  bool operator==(const FinCategory&) const = default;
};

using FinCategoryPtr = std::shared_ptr<const FinCategory>;

// Builds a category skeleton: generates identities and derives every
// composition entry that involves an identity. Entries for non-identity
// composable pairs start out unset.
FinCategory make_category(std::string name, std::vector<std::string> objects,
                          std::vector<Morphism> declared);
void set_composite(FinCategory& C, MorId g, MorId f, MorId gf);

ValidationReport validate_category(const FinCategory& C);
MorId compose(const FinCategory& C, MorId g, MorId f);
std::vector<MorId> hom(const FinCategory& C, ObjId x, ObjId y);

struct FinFunctor {
  std::string name;
  FinCategoryPtr source;
  FinCategoryPtr target;
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;

  ObjId on(ObjId x) const { return obj_map[x.value]; }
  MorId on(MorId f) const { return mor_map[f.value]; }
  bool operator==(const FinFunctor& o) const;
};

// Equality of everything except the name; used where two independently
// constructed functors must agree as maps.
bool same_behaviour(const FinFunctor& a, const FinFunctor& b);

ValidationReport validate_functor(const FinFunctor& F);
FinFunctor identity_functor(FinCategoryPtr C);
FinFunctor constant_functor(std::string name, FinCategoryPtr source,
                            FinCategoryPtr target, ObjId at);
FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F);

struct FinNatTrans {
  std::string name;
  FinFunctor from;
  FinFunctor to;
  std::vector<MorId> components;  // indexed by source object

  MorId at(ObjId x) const { return components[x.value]; }
  bool operator==(const FinNatTrans& o) const;
};

ValidationReport validate_nat_trans(const FinNatTrans& a);

// Comma category d ↓ F: objects are pairs (m, f : d → F(m)); a morphism
// (m, f) → (m', f') is a u : m → m' with F(u)∘f = f'.
struct CommaCategory {
  FinCategoryPtr category;
  std::vector<std::pair<ObjId, MorId>> object_labels;
  std::vector<MorId> morphism_labels;
};

CommaCategory comma_category(ObjId d, const FinFunctor& F);

// All x such that hom(x, y) is a singleton for every y.
std::vector<ObjId> initial_objects(const FinCategory& C);

struct ProductCategory {
  FinCategoryPtr category;
  std::vector<std::pair<ObjId, ObjId>> object_labels;
  std::vector<std::pair<MorId, MorId>> morphism_labels;
  std::vector<std::vector<std::uint32_t>> object_index;
  std::vector<std::vector<std::uint32_t>> morphism_index;

  ObjId pair_object(ObjId left, ObjId right) const {
    return ObjId{object_index[left.value][right.value]};
  }
  MorId pair_morphism(MorId left, MorId right) const {
    return MorId{morphism_index[left.value][right.value]};
  }
};

ProductCategory product_category(FinCategoryPtr left, FinCategoryPtr right);

// Unitors and the associator are relabelling bijections on product
// categories, never stored data. The factor being projected onto must be
// handed in so the functor can point at it.
FinFunctor product_left_unitor(const ProductCategory& P,
                               FinCategoryPtr right_factor);  // 1 × C → C
FinFunctor product_right_unitor(const ProductCategory& P,
                                FinCategoryPtr left_factor);  // C × 1 → C
FinFunctor product_associator(FinCategoryPtr C, FinCategoryPtr D,
                              FinCategoryPtr E);  // (C×D)×E → C×(D×E)

// Streams every functor source → target exactly once, in odometer order
// over object images and then morphism images. Throws BudgetExceeded from
// the constructor when the candidate-space estimate is over budget.
class FunctorEnumerator {
 public:
  FunctorEnumerator(FinCategoryPtr source, FinCategoryPtr target,
                    Budget budget = {});
  std::uint64_t estimate() const { return estimate_; }
  std::optional<FinFunctor> next();

 private:
  bool first_layout();
  bool next_layout();
  bool bump_objects();
  bool rebuild_candidates();
  bool step_morphisms();
  FinFunctor current();
  bool laws_hold(const FinFunctor& F) const;

  FinCategoryPtr source_;
  FinCategoryPtr target_;
  std::uint64_t estimate_ = 0;
  bool done_ = false;
  bool started_ = false;
  bool mor_live_ = false;
  std::vector<std::uint32_t> obj_choice_;
  std::vector<std::vector<MorId>> candidates_;  // per declared morphism
  std::vector<std::uint32_t> mor_choice_;
  std::size_t emitted_ = 0;
};

std::vector<FinFunctor> enumerate_functors(FinCategoryPtr source,
                                           FinCategoryPtr target,
                                           Budget budget = {});

}  // namespace kanopt
