#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kanopt/error.hpp"
#include "kanopt/fincat.hpp"
#include "kanopt/validation.hpp"

namespace kanopt {

// Strict 2-category with finite hom categories. 1-morphisms are objects of
// the hom categories, 2-morphisms their morphisms. Composition for each
// triple (x,y,z) is a functor hom(y,z) × hom(x,y) → hom(x,z); the product
// source is cached alongside so pairs can be indexed.
struct Fin2Category {
  std::string name;
  std::vector<std::string> objects;
  std::vector<FinCategoryPtr> hom;          // row-major x*n + y
  std::vector<FinFunctor> comp;             // row-major (x*n + y)*n + z
  std::vector<ProductCategory> comp_source;  // aligned with comp
  std::vector<ObjId> identity_1cell;        // per object, object of hom(x,x)

  std::size_t size() const { return objects.size(); }
  const FinCategory& hom_at(std::size_t x, std::size_t y) const {
    return *hom[x * size() + y];
  }
  FinCategoryPtr hom_ptr(std::size_t x, std::size_t y) const {
    return hom[x * size() + y];
  }
  std::size_t comp_index(std::size_t x, std::size_t y, std::size_t z) const {
    return (x * size() + y) * size() + z;
  }
  std::optional<std::uint32_t> find_object(std::string_view n) const;

  bool operator==(const Fin2Category& o) const;
};

using Fin2CategoryPtr = std::shared_ptr<const Fin2Category>;

ValidationReport validate_2category(const Fin2Category& T);

// Horizontal composite of a 1-cell with a 2-cell. whisker_left puts the
// 1-cell h ∈ hom(y,z) on the left of the composite (h·σ for σ in hom(x,y));
// whisker_right puts the 1-cell f ∈ hom(x,y) on the right (σ·f for σ in
// hom(y,z)).
MorId whisker_left(const Fin2Category& T, std::size_t x, std::size_t y,
                   std::size_t z, ObjId h, MorId sigma);
MorId whisker_right(const Fin2Category& T, std::size_t x, std::size_t y,
                    std::size_t z, MorId sigma, ObjId f);

// Composition of 1-cells / 2-cells through the composition functor.
ObjId compose_1cells(const Fin2Category& T, std::size_t x, std::size_t y,
                     std::size_t z, ObjId g, ObjId f);
MorId compose_2cells(const Fin2Category& T, std::size_t x, std::size_t y,
                     std::size_t z, MorId sigma, MorId tau);

// The extension triangle: a 1-cell iota : delta → mu and a 1-cell
// d : delta → tau to be extended along iota.
struct ExtensionProblem {
  std::string name;
  Fin2CategoryPtr T;
  std::uint32_t delta = 0;
  std::uint32_t mu = 0;
  std::uint32_t tau = 0;
  ObjId iota;  // object of hom(delta, mu)
  ObjId d;     // object of hom(delta, tau)

  bool operator==(const ExtensionProblem& o) const;
};

// Precomposition with iota turns the triangle into a minimisation problem:
// models are hom(mu,tau), data hom(delta,tau), inference m ↦ m∘iota.
CatErrorProblem extension_to_minimisation(const ExtensionProblem& E,
                                          const LaxErrorAssignment& err);
FinFunctor precomposition_functor(const ExtensionProblem& E);

enum class KanMode { weak, strict };

struct KanPair {
  ObjId lan;  // object of hom(mu, tau)
  MorId eta;  // d ⇒ lan∘iota in hom(delta, tau)
};

// Every pair (lan, eta) satisfying the universal extension property: each
// (H, g : d ⇒ H∘iota) factors as g = (alpha·iota)∘eta for some 2-cell
// alpha : lan ⇒ H — a unique one in strict mode.
std::vector<KanPair> left_kan_extension(const ExtensionProblem& E,
                                        KanMode mode = KanMode::strict,
                                        Budget budget = {});

bool check_kan_minimises(const ExtensionProblem& E,
                         const LaxErrorAssignment& err, Budget budget = {});

// Packages a set problem as an extension problem in a three-object
// 2-category whose hom(mu,tau) is the model category, hom(delta,tau) the
// data category, and whose composition with iota is inference.
struct RepresentationBundle {
  Fin2CategoryPtr T;
  ExtensionProblem problem;
  std::vector<std::uint32_t> alg;  // data index → model index (npos if none)
  std::vector<std::string> model_labels;
  std::vector<std::string> data_labels;

  static constexpr std::uint32_t npos = 0xffffffffu;
};

RepresentationBundle build_representation(
    const SetErrorProblem& P, const std::vector<std::uint32_t>* tie_break = nullptr);

// Direct presentation of a functor F : M → D as an extension 2-category:
// hom(mu,tau) = M, hom(delta,tau) = D, composition with the single iota
// 1-cell acts as F.
Fin2CategoryPtr direct_extension_2category(std::string name, FinCategoryPtr M,
                                           FinCategoryPtr D,
                                           const FinFunctor& F);
ExtensionProblem direct_extension_problem(std::string name, Fin2CategoryPtr T,
                                          ObjId target);

struct RepresentationReport {
  std::vector<std::string> kan_objects;
  std::vector<std::string> minimisers;
  bool subset_ok = false;
  std::optional<bool> iff_ok;  // absent when not applicable
};

RepresentationReport check_representation(const SetErrorProblem& P,
                                          Budget budget = {});

}  // namespace kanopt
