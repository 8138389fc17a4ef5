#include "kanopt/twocat.hpp"

#include <algorithm>

namespace kanopt {

std::optional<std::uint32_t> Fin2Category::find_object(
    std::string_view n) const {
  for (std::uint32_t i = 0; i < objects.size(); ++i) {
    if (objects[i] == n) return i;
  }
  return std::nullopt;
}

bool Fin2Category::operator==(const Fin2Category& o) const {
  if (name != o.name || objects != o.objects ||
      identity_1cell != o.identity_1cell || hom.size() != o.hom.size() ||
      comp.size() != o.comp.size()) {
    return false;
  }
  for (std::size_t i = 0; i < hom.size(); ++i) {
    if (*hom[i] != *o.hom[i]) return false;
  }
  for (std::size_t i = 0; i < comp.size(); ++i) {
    if (comp[i] != o.comp[i]) return false;
  }
  return true;
}

ObjId compose_1cells(const Fin2Category& T, std::size_t x, std::size_t y,
                     std::size_t z, ObjId g, ObjId f) {
  const auto idx = T.comp_index(x, y, z);
  return T.comp[idx].on(T.comp_source[idx].pair_object(g, f));
}

MorId compose_2cells(const Fin2Category& T, std::size_t x, std::size_t y,
                     std::size_t z, MorId sigma, MorId tau) {
  const auto idx = T.comp_index(x, y, z);
  return T.comp[idx].on(T.comp_source[idx].pair_morphism(sigma, tau));
}

MorId whisker_left(const Fin2Category& T, std::size_t x, std::size_t y,
                   std::size_t z, ObjId h, MorId sigma) {
  const auto& yz = T.hom_at(y, z);
  if (h.value >= yz.object_count()) {
    throw NotComposable("whisker 1-cell not in hom(" + T.objects[y] + "," +
                        T.objects[z] + ")");
  }
  if (sigma.value >= T.hom_at(x, y).morphism_count()) {
    throw NotComposable("whisker 2-cell not in hom(" + T.objects[x] + "," +
                        T.objects[y] + ")");
  }
  return compose_2cells(T, x, y, z, yz.identity(h), sigma);
}

MorId whisker_right(const Fin2Category& T, std::size_t x, std::size_t y,
                    std::size_t z, MorId sigma, ObjId f) {
  const auto& xy = T.hom_at(x, y);
  if (f.value >= xy.object_count()) {
    throw NotComposable("whisker 1-cell not in hom(" + T.objects[x] + "," +
                        T.objects[y] + ")");
  }
  if (sigma.value >= T.hom_at(y, z).morphism_count()) {
    throw NotComposable("whisker 2-cell not in hom(" + T.objects[y] + "," +
                        T.objects[z] + ")");
  }
  return compose_2cells(T, x, y, z, sigma, xy.identity(f));
}

ValidationReport validate_2category(const Fin2Category& T) {
  ValidationReport report;
  const auto n = T.size();
  if (T.hom.size() != n * n || T.comp.size() != n * n * n ||
      T.comp_source.size() != n * n * n || T.identity_1cell.size() != n) {
    report.add("tables not total", T.name);
    return report;
  }

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      report.merge(validate_category(T.hom_at(x, y)),
                   "hom(" + T.objects[x] + "," + T.objects[y] + "): ");
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (T.identity_1cell[x].value >= T.hom_at(x, x).object_count()) {
      report.add("identity 1-cell missing at " + T.objects[x], "");
    }
  }
  if (!report.ok()) return report;

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        const auto idx = T.comp_index(x, y, z);
        const auto where = "comp(" + T.objects[x] + "," + T.objects[y] + "," +
                           T.objects[z] + ")";
        const auto expect =
            product_category(T.hom_ptr(y, z), T.hom_ptr(x, y));
        if (*T.comp[idx].source != *expect.category) {
          report.add(where + " source is not the product category", "");
          continue;
        }
        if (*T.comp_source[idx].category != *expect.category) {
          report.add(where + " cached product out of step", "");
          continue;
        }
        if (*T.comp[idx].target != T.hom_at(x, z)) {
          report.add(where + " target mismatch", "");
          continue;
        }
        report.merge(validate_functor(T.comp[idx]), where + ": ");
      }
    }
  }
  if (!report.ok()) return report;

  // Strict unit laws on 1-cells and 2-cells.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const auto& C = T.hom_at(x, y);
      const auto jx = T.identity_1cell[x];
      const auto jy = T.identity_1cell[y];
      for (std::uint32_t f = 0; f < C.object_count(); ++f) {
        if (compose_1cells(T, x, x, y, ObjId{f}, jx) != ObjId{f}) {
          report.add("right unit law", T.objects[x] + "→" + T.objects[y] +
                                            " at " + C.objects[f]);
        }
        if (compose_1cells(T, x, y, y, jy, ObjId{f}) != ObjId{f}) {
          report.add("left unit law", T.objects[x] + "→" + T.objects[y] +
                                          " at " + C.objects[f]);
        }
      }
      const auto id_jx = T.hom_at(x, x).identity(jx);
      const auto id_jy = T.hom_at(y, y).identity(jy);
      for (std::uint32_t s = 0; s < C.morphism_count(); ++s) {
        if (compose_2cells(T, x, x, y, MorId{s}, id_jx) != MorId{s}) {
          report.add("right unit law (2-cells)", C.mor(MorId{s}).name);
        }
        if (compose_2cells(T, x, y, y, id_jy, MorId{s}) != MorId{s}) {
          report.add("left unit law (2-cells)", C.mor(MorId{s}).name);
        }
      }
    }
  }

  // Strict associativity on 1-cells and on 2-cells.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        for (std::size_t w = 0; w < n; ++w) {
          const auto& XY = T.hom_at(x, y);
          const auto& YZ = T.hom_at(y, z);
          const auto& ZW = T.hom_at(z, w);
          for (std::uint32_t f = 0; f < XY.object_count(); ++f) {
            for (std::uint32_t g = 0; g < YZ.object_count(); ++g) {
              for (std::uint32_t h = 0; h < ZW.object_count(); ++h) {
                const auto hg = compose_1cells(T, y, z, w, ObjId{h}, ObjId{g});
                const auto gf = compose_1cells(T, x, y, z, ObjId{g}, ObjId{f});
                if (compose_1cells(T, x, y, w, hg, ObjId{f}) !=
                    compose_1cells(T, x, z, w, ObjId{h}, gf)) {
                  report.add("associativity of 1-cell composition",
                             ZW.objects[h] + "∘" + YZ.objects[g] + "∘" +
                                 XY.objects[f]);
                }
              }
            }
          }
          for (std::uint32_t f = 0; f < XY.morphism_count(); ++f) {
            for (std::uint32_t g = 0; g < YZ.morphism_count(); ++g) {
              for (std::uint32_t h = 0; h < ZW.morphism_count(); ++h) {
                const auto hg = compose_2cells(T, y, z, w, MorId{h}, MorId{g});
                const auto gf = compose_2cells(T, x, y, z, MorId{g}, MorId{f});
                if (compose_2cells(T, x, y, w, hg, MorId{f}) !=
                    compose_2cells(T, x, z, w, MorId{h}, gf)) {
                  report.add("associativity of 2-cell composition",
                             ZW.mor(MorId{h}).name + "∘" +
                                 YZ.mor(MorId{g}).name + "∘" +
                                 XY.mor(MorId{f}).name);
                }
              }
            }
          }
        }
      }
    }
  }

  // Interchange follows from functoriality of the composition; spot-check
  // it directly anyway.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        const auto& XY = T.hom_at(x, y);
        const auto& YZ = T.hom_at(y, z);
        const auto& XZ = T.hom_at(x, z);
        for (std::uint32_t s1 = 0; s1 < YZ.morphism_count(); ++s1) {
          for (std::uint32_t s2 = 0; s2 < YZ.morphism_count(); ++s2) {
            if (!YZ.composable(MorId{s2}, MorId{s1})) continue;
            const auto s21 = YZ.composite(MorId{s2}, MorId{s1});
            for (std::uint32_t t1 = 0; t1 < XY.morphism_count(); ++t1) {
              for (std::uint32_t t2 = 0; t2 < XY.morphism_count(); ++t2) {
                if (!XY.composable(MorId{t2}, MorId{t1})) continue;
                const auto t21 = XY.composite(MorId{t2}, MorId{t1});
                if (!s21 || !t21) continue;
                const auto lhs = compose_2cells(T, x, y, z, *s21, *t21);
                const auto a = compose_2cells(T, x, y, z, MorId{s1}, MorId{t1});
                const auto b = compose_2cells(T, x, y, z, MorId{s2}, MorId{t2});
                const auto rhs = XZ.composite(b, a);
                if (!rhs || lhs != *rhs) {
                  report.add("interchange",
                             "(" + YZ.mor(MorId{s2}).name + "," +
                                 YZ.mor(MorId{s1}).name + ") with (" +
                                 XY.mor(MorId{t2}).name + "," +
                                 XY.mor(MorId{t1}).name + ")");
                }
              }
            }
          }
        }
      }
    }
  }
  return report;
}

bool ExtensionProblem::operator==(const ExtensionProblem& o) const {
  return name == o.name && *T == *o.T && delta == o.delta && mu == o.mu &&
         tau == o.tau && iota == o.iota && d == o.d;
}

FinFunctor precomposition_functor(const ExtensionProblem& E) {
  const auto& T = *E.T;
  const auto models = T.hom_ptr(E.mu, E.tau);
  const auto data = T.hom_ptr(E.delta, E.tau);
  const auto iota_id = T.hom_at(E.delta, E.mu).identity(E.iota);

  FinFunctor F;
  F.name = E.name + "_inf";
  F.source = models;
  F.target = data;
  F.obj_map.reserve(models->object_count());
  for (std::uint32_t m = 0; m < models->object_count(); ++m) {
    F.obj_map.push_back(
        compose_1cells(T, E.delta, E.mu, E.tau, ObjId{m}, E.iota));
  }
  F.mor_map.reserve(models->morphism_count());
  for (std::uint32_t s = 0; s < models->morphism_count(); ++s) {
    F.mor_map.push_back(
        compose_2cells(T, E.delta, E.mu, E.tau, MorId{s}, iota_id));
  }
  return F;
}

CatErrorProblem extension_to_minimisation(const ExtensionProblem& E,
                                          const LaxErrorAssignment& err) {
  const auto& T = *E.T;
  if (*err.category != T.hom_at(E.delta, E.tau)) {
    throw CategoryMismatch("error for " + E.name +
                           " is not on hom(delta,tau)");
  }
  CatErrorProblem P;
  P.name = E.name;
  P.models = T.hom_ptr(E.mu, E.tau);
  P.data = T.hom_ptr(E.delta, E.tau);
  P.inf = precomposition_functor(E);
  P.error = err;
  P.target = E.d;
  return P;
}

std::vector<KanPair> left_kan_extension(const ExtensionProblem& E,
                                        KanMode mode, Budget budget) {
  const auto& T = *E.T;
  const auto& models = T.hom_at(E.mu, E.tau);
  const auto& data = T.hom_at(E.delta, E.tau);
  const auto inf = precomposition_functor(E);

  std::uint64_t pair_count = 0;
  for (std::uint32_t x = 0; x < models.object_count(); ++x) {
    pair_count += hom(data, E.d, inf.on(ObjId{x})).size();
  }
  const auto estimate = sat_mul(sat_mul(pair_count, pair_count),
                                models.morphism_count() + 1);
  if (estimate > budget.limit) throw BudgetExceeded(estimate);

  std::vector<KanPair> out;
  for (std::uint32_t x = 0; x < models.object_count(); ++x) {
    for (const auto e : hom(data, E.d, inf.on(ObjId{x}))) {
      bool universal = true;
      for (std::uint32_t H = 0; H < models.object_count() && universal; ++H) {
        for (const auto g : hom(data, E.d, inf.on(ObjId{H}))) {
          std::size_t count = 0;
          for (const auto alpha : hom(models, ObjId{x}, ObjId{H})) {
            const auto whiskered = inf.on(alpha);
            const auto composite = data.composite(whiskered, e);
            if (composite && *composite == g) ++count;
          }
          const bool satisfied =
              mode == KanMode::strict ? count == 1 : count >= 1;
          if (!satisfied) {
            universal = false;
            break;
          }
        }
      }
      if (universal) out.push_back({ObjId{x}, e});
    }
  }
  return out;
}

bool check_kan_minimises(const ExtensionProblem& E,
                         const LaxErrorAssignment& err, Budget budget) {
  const auto pairs = left_kan_extension(E, KanMode::strict, budget);
  if (pairs.empty()) return true;
  const auto P = extension_to_minimisation(E, err);
  const auto minimisers = brute_force_minimisers_cat(P);
  for (const auto& pair : pairs) {
    if (std::find(minimisers.begin(), minimisers.end(), pair.lan) ==
        minimisers.end()) {
      return false;
    }
  }
  return true;
}

Fin2CategoryPtr direct_extension_2category(std::string name, FinCategoryPtr M,
                                           FinCategoryPtr D,
                                           const FinFunctor& F) {
  if (*F.source != *M || *F.target != *D) {
    throw CategoryMismatch("presentation functor endpoints mismatch");
  }
  auto T = std::make_shared<Fin2Category>();
  T->name = std::move(name);
  T->objects = {"mu", "delta", "tau"};

  auto one = std::make_shared<const FinCategory>(
      make_category(T->name + "_one", {"I"}, {}));
  auto iota_cat = std::make_shared<const FinCategory>(
      make_category(T->name + "_iota", {"iota"}, {}));
  auto empty = std::make_shared<const FinCategory>(
      make_category(T->name + "_empty", {}, {}));

  const std::size_t mu = 0, delta = 1, tau = 2;
  T->hom.assign(9, empty);
  auto set_hom = [&](std::size_t x, std::size_t y, FinCategoryPtr c) {
    T->hom[x * 3 + y] = std::move(c);
  };
  set_hom(mu, mu, one);
  set_hom(delta, delta, one);
  set_hom(tau, tau, one);
  set_hom(delta, mu, iota_cat);
  set_hom(mu, tau, M);
  set_hom(delta, tau, D);
  T->identity_1cell = {ObjId{0}, ObjId{0}, ObjId{0}};

  T->comp.resize(27);
  T->comp_source.resize(27);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      for (std::size_t z = 0; z < 3; ++z) {
        const auto idx = T->comp_index(x, y, z);
        auto prod = product_category(T->hom_ptr(y, z), T->hom_ptr(x, y));
        FinFunctor comp;
        comp.name = "comp_" + T->objects[x] + "_" + T->objects[y] + "_" +
                    T->objects[z];
        comp.source = prod.category;
        comp.target = T->hom_ptr(x, z);
        comp.obj_map.resize(prod.object_labels.size());
        comp.mor_map.resize(prod.morphism_labels.size());
        // hom(x,x) is the unit hom, so x == y means the right factor is
        // trivial (project left) and y == z means the left factor is
        // trivial (project right). The only other inhabited triple is the
        // inference one.
        const bool from_inf = x == delta && y == mu && z == tau;
        const bool project_left = x == y;
        for (std::uint32_t o = 0; o < prod.object_labels.size(); ++o) {
          const auto [g, f] = prod.object_labels[o];
          if (from_inf) {
            comp.obj_map[o] = F.on(g);
          } else if (project_left) {
            comp.obj_map[o] = g;
          } else {
            comp.obj_map[o] = f;
          }
        }
        for (std::uint32_t s = 0; s < prod.morphism_labels.size(); ++s) {
          const auto [sg, sf] = prod.morphism_labels[s];
          if (from_inf) {
            comp.mor_map[s] = F.on(sg);
          } else if (project_left) {
            comp.mor_map[s] = sg;
          } else {
            comp.mor_map[s] = sf;
          }
        }
        T->comp[idx] = std::move(comp);
        T->comp_source[idx] = std::move(prod);
      }
    }
  }
  return T;
}

ExtensionProblem direct_extension_problem(std::string name, Fin2CategoryPtr T,
                                          ObjId target) {
  ExtensionProblem E;
  E.name = std::move(name);
  E.T = std::move(T);
  E.mu = 0;
  E.delta = 1;
  E.tau = 2;
  E.iota = ObjId{0};
  E.d = target;
  return E;
}

RepresentationBundle build_representation(
    const SetErrorProblem& P, const std::vector<std::uint32_t>* tie_break) {
  std::vector<std::uint32_t> rank(P.models.size());
  for (std::uint32_t i = 0; i < rank.size(); ++i) rank[i] = i;
  if (tie_break) rank = *tie_break;

  RepresentationBundle bundle;
  bundle.model_labels = P.models;
  bundle.data_labels = P.data;
  bundle.alg.assign(P.data.size(), RepresentationBundle::npos);

  if (!P.models.empty()) {
    for (std::uint32_t d = 0; d < P.data.size(); ++d) {
      SetErrorProblem Q = P;
      Q.target = d;
      const auto result = brute_force_minimisers_set(Q);
      // Forced selection: an exact fit must be chosen when one exists.
      std::vector<std::uint32_t> pool;
      for (const auto m : result.minimisers) {
        if (P.inf[m] == d) pool.push_back(m);
      }
      if (pool.empty()) pool = result.minimisers;
      auto best = pool.front();
      for (const auto m : pool) {
        if (rank[m] < rank[best]) best = m;
      }
      bundle.alg[d] = best;
    }
  }

  // Model category: one morphism m → m' exactly when inference agrees.
  std::vector<Morphism> model_mors;
  for (std::uint32_t i = 0; i < P.models.size(); ++i) {
    for (std::uint32_t j = 0; j < P.models.size(); ++j) {
      if (i == j || P.inf[i] != P.inf[j]) continue;
      model_mors.push_back(
          {"eq_" + P.models[i] + "_" + P.models[j], ObjId{i}, ObjId{j}});
    }
  }
  auto modelsC = make_category(P.name + "_models", P.models, model_mors);
  {
    const auto m = modelsC.morphism_count();
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = 0; b < m; ++b) {
        if (modelsC.is_identity(MorId{a}) || modelsC.is_identity(MorId{b})) {
          continue;
        }
        if (!modelsC.composable(MorId{b}, MorId{a})) continue;
        const auto src = modelsC.mor(MorId{a}).dom;
        const auto dst = modelsC.mor(MorId{b}).cod;
        MorId entry;
        if (src == dst) {
          entry = modelsC.identity(src);
        } else {
          entry = *modelsC.find_morphism("eq_" + P.models[src.value] + "_" +
                                         P.models[dst.value]);
        }
        set_composite(modelsC, MorId{b}, MorId{a}, entry);
      }
    }
  }

  // Data category: besides identities, one selector morphism per data
  // point whose chosen model lands elsewhere.
  std::vector<Morphism> data_mors;
  for (std::uint32_t d = 0; d < P.data.size(); ++d) {
    if (bundle.alg[d] == RepresentationBundle::npos) continue;
    const auto image = P.inf[bundle.alg[d]];
    if (image == d) continue;
    data_mors.push_back({"sel_" + P.data[d], ObjId{d}, ObjId{image}});
  }
  auto dataC = make_category(P.name + "_data", P.data, data_mors);
  {
    // Selector targets are fixed points of the selection, so no two
    // selectors compose; the loop exists to surface any violation of that
    // through a missing-entry report instead of silently mis-building.
    const auto m = dataC.morphism_count();
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = 0; b < m; ++b) {
        if (dataC.is_identity(MorId{a}) || dataC.is_identity(MorId{b})) {
          continue;
        }
        if (!dataC.composable(MorId{b}, MorId{a})) continue;
        const auto src = dataC.mor(MorId{a}).dom;
        const auto dst = dataC.mor(MorId{b}).cod;
        for (std::uint32_t c = 0; c < m; ++c) {
          if (dataC.mor(MorId{c}).dom == src && dataC.mor(MorId{c}).cod == dst) {
            set_composite(dataC, MorId{b}, MorId{a}, MorId{c});
            break;
          }
        }
      }
    }
  }

  auto modelsPtr = std::make_shared<const FinCategory>(std::move(modelsC));
  auto dataPtr = std::make_shared<const FinCategory>(std::move(dataC));

  // Inference as a functor between the two constructed categories.
  FinFunctor inf;
  inf.name = P.name + "_inf";
  inf.source = modelsPtr;
  inf.target = dataPtr;
  inf.obj_map.reserve(P.models.size());
  for (std::uint32_t m = 0; m < P.models.size(); ++m) {
    inf.obj_map.push_back(ObjId{P.inf[m]});
  }
  inf.mor_map.resize(modelsPtr->morphism_count());
  for (std::uint32_t s = 0; s < modelsPtr->morphism_count(); ++s) {
    const auto image = inf.obj_map[modelsPtr->mor(MorId{s}).dom.value];
    inf.mor_map[s] = dataPtr->identity(image);
  }

  bundle.T = direct_extension_2category(P.name + "_rep", modelsPtr, dataPtr,
                                        inf);
  bundle.problem = direct_extension_problem(P.name + "_ext", bundle.T,
                                            ObjId{P.target});
  if (!validate_2category(*bundle.T).ok()) {
    throw Error("constructed representation for " + P.name +
                " failed 2-category validation");
  }
  return bundle;
}

RepresentationReport check_representation(const SetErrorProblem& P,
                                          Budget budget) {
  RepresentationReport report;
  const auto bundle = build_representation(P);
  const auto pairs = left_kan_extension(bundle.problem, KanMode::strict, budget);
  const auto result = brute_force_minimisers_set(P);

  for (const auto& pair : pairs) {
    report.kan_objects.push_back(bundle.model_labels[pair.lan.value]);
  }
  for (const auto m : result.minimisers) {
    report.minimisers.push_back(P.models[m]);
  }

  auto is_minimiser = [&](std::uint32_t m) {
    return std::find(result.minimisers.begin(), result.minimisers.end(), m) !=
           result.minimisers.end();
  };
  bool subset = true;
  for (const auto& pair : pairs) {
    if (!is_minimiser(pair.lan.value)) subset = false;
  }
  if (bundle.alg.empty() ||
      (P.target < bundle.alg.size() &&
       bundle.alg[P.target] == RepresentationBundle::npos)) {
    // No selection available (empty model space): nothing more to require.
  } else if (!P.models.empty()) {
    bool alg_found = false;
    for (const auto& pair : pairs) {
      if (pair.lan.value == bundle.alg[P.target]) alg_found = true;
    }
    subset = subset && alg_found;
  }
  report.subset_ok = subset;

  // The biconditional is only claimed when every minimiser shares one
  // inference image; otherwise report not-applicable.
  if (!result.minimisers.empty()) {
    bool shared = true;
    for (const auto m : result.minimisers) {
      if (P.inf[m] != P.inf[result.minimisers.front()]) shared = false;
    }
    if (shared) {
      std::vector<std::uint32_t> closure;
      for (std::uint32_t m = 0; m < P.models.size(); ++m) {
        for (const auto& pair : pairs) {
          if (P.inf[m] == P.inf[pair.lan.value]) {
            closure.push_back(m);
            break;
          }
        }
      }
      report.iff_ok = closure == result.minimisers;
    }
  }
  return report;
}

}  // namespace kanopt
