#include "kanopt/fincat.hpp"

#include <algorithm>
#include <map>

namespace kanopt {

namespace {

std::string pair_name(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

}  // namespace

std::optional<ObjId> FinCategory::find_object(std::string_view n) const {
  for (std::uint32_t i = 0; i < objects.size(); ++i) {
    if (objects[i] == n) return ObjId{i};
  }
  return std::nullopt;
}

std::optional<MorId> FinCategory::find_morphism(std::string_view n) const {
  for (std::uint32_t i = 0; i < morphisms.size(); ++i) {
    if (morphisms[i].name == n) return MorId{i};
  }
  return std::nullopt;
}

FinCategory make_category(std::string name, std::vector<std::string> objects,
                          std::vector<Morphism> declared) {
  FinCategory C;
  C.name = std::move(name);
  C.objects = std::move(objects);
  C.morphisms.reserve(C.objects.size() + declared.size());
  for (std::uint32_t i = 0; i < C.objects.size(); ++i) {
    C.morphisms.push_back({"id_" + C.objects[i], ObjId{i}, ObjId{i}});
  }
  for (auto& m : declared) C.morphisms.push_back(std::move(m));

  const auto n = C.morphisms.size();
  C.comp.assign(n, std::vector<std::uint32_t>(n, FinCategory::no_entry));
  // Identity compositions are derived, never declared.
  for (std::uint32_t f = 0; f < n; ++f) {
    const auto& mor = C.morphisms[f];
    C.comp[C.identity(mor.cod).value][f] = f;
    C.comp[f][C.identity(mor.dom).value] = f;
  }
  return C;
}

void set_composite(FinCategory& C, MorId g, MorId f, MorId gf) {
  C.comp[g.value][f.value] = gf.value;
}

ValidationReport validate_category(const FinCategory& C) {
  ValidationReport report;
  const auto m = C.morphism_count();
  for (std::uint32_t f = 0; f < m; ++f) {
    const auto& mf = C.morphisms[f];
    if (mf.dom.value >= C.object_count() || mf.cod.value >= C.object_count()) {
      report.add("morphism endpoints out of range", mf.name);
    }
  }
  if (!report.ok()) return report;  // tables unusable beyond this point

  for (std::uint32_t g = 0; g < m; ++g) {
    for (std::uint32_t f = 0; f < m; ++f) {
      const auto entry = C.comp[g][f];
      const bool composable = C.composable(MorId{g}, MorId{f});
      const std::string witness =
          "(" + C.morphisms[g].name + ", " + C.morphisms[f].name + ")";
      if (composable && entry == FinCategory::no_entry) {
        report.add("missing composition entry", witness);
        continue;
      }
      if (!composable && entry != FinCategory::no_entry) {
        report.add("composition entry for non-composable pair", witness);
        continue;
      }
      if (!composable) continue;
      if (entry >= m) {
        report.add("composition entry out of range", witness);
        continue;
      }
      const auto& gf = C.morphisms[entry];
      if (gf.dom != C.morphisms[f].dom || gf.cod != C.morphisms[g].cod) {
        report.add("composite endpoint mismatch", witness);
      }
    }
  }

  for (std::uint32_t f = 0; f < m; ++f) {
    const auto& mf = C.morphisms[f];
    const auto left = C.comp[C.identity(mf.cod).value][f];
    const auto right = C.comp[f][C.identity(mf.dom).value];
    if (left != f || right != f) {
      report.add("identity law at " + mf.name, "");
    }
  }

  for (std::uint32_t h = 0; h < m; ++h) {
    for (std::uint32_t g = 0; g < m; ++g) {
      if (!C.composable(MorId{h}, MorId{g})) continue;
      const auto hg = C.comp[h][g];
      for (std::uint32_t f = 0; f < m; ++f) {
        if (!C.composable(MorId{g}, MorId{f})) continue;
        const auto gf = C.comp[g][f];
        if (hg == FinCategory::no_entry || gf == FinCategory::no_entry) {
          continue;  // already reported as missing
        }
        const auto lhs = C.comp[hg][f];
        const auto rhs = C.comp[h][gf];
        if (lhs == FinCategory::no_entry || rhs == FinCategory::no_entry) {
          continue;
        }
        if (lhs != rhs) {
          report.add("associativity",
                     "(" + C.morphisms[h].name + ", " + C.morphisms[g].name +
                         ", " + C.morphisms[f].name + ")");
        }
      }
    }
  }
  return report;
}

MorId compose(const FinCategory& C, MorId g, MorId f) {
  if (!C.composable(g, f)) {
    throw NotComposable("cannot compose " + C.mor(g).name + " after " +
                        C.mor(f).name);
  }
  const auto entry = C.comp[g.value][f.value];
  if (entry == FinCategory::no_entry) {
    throw MissingEntry("no composition entry for (" + C.mor(g).name + ", " +
                       C.mor(f).name + ")");
  }
  return MorId{entry};
}

std::vector<MorId> hom(const FinCategory& C, ObjId x, ObjId y) {
  if (x.value >= C.object_count() || y.value >= C.object_count()) {
    throw UnknownObject("hom endpoints not in " + C.name);
  }
  std::vector<MorId> out;
  for (std::uint32_t i = 0; i < C.morphism_count(); ++i) {
    if (C.morphisms[i].dom == x && C.morphisms[i].cod == y) {
      out.push_back(MorId{i});
    }
  }
  return out;
}

bool FinFunctor::operator==(const FinFunctor& o) const {
  return name == o.name && *source == *o.source && *target == *o.target &&
         obj_map == o.obj_map && mor_map == o.mor_map;
}

bool same_behaviour(const FinFunctor& a, const FinFunctor& b) {
  return *a.source == *b.source && *a.target == *b.target &&
         a.obj_map == b.obj_map && a.mor_map == b.mor_map;
}

ValidationReport validate_functor(const FinFunctor& F) {
  ValidationReport report;
  const auto& C = *F.source;
  const auto& D = *F.target;
  if (F.obj_map.size() != C.object_count() ||
      F.mor_map.size() != C.morphism_count()) {
    report.add("map not total", F.name);
    return report;
  }
  for (const auto x : F.obj_map) {
    if (x.value >= D.object_count()) {
      report.add("object image out of range", F.name);
      return report;
    }
  }
  for (const auto f : F.mor_map) {
    if (f.value >= D.morphism_count()) {
      report.add("morphism image out of range", F.name);
      return report;
    }
  }

  for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
    const auto& mf = C.morphisms[f];
    const auto& image = D.mor(F.on(MorId{f}));
    if (image.dom != F.on(mf.dom)) {
      report.add("dom preservation at " + mf.name, "");
    }
    if (image.cod != F.on(mf.cod)) {
      report.add("cod preservation at " + mf.name, "");
    }
  }
  for (std::uint32_t x = 0; x < C.object_count(); ++x) {
    if (F.on(C.identity(ObjId{x})) != D.identity(F.on(ObjId{x}))) {
      report.add("identity preservation at " + C.objects[x], "");
    }
  }
  for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
    for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
      if (!C.composable(MorId{g}, MorId{f})) continue;
      const auto gf = C.composite(MorId{g}, MorId{f});
      if (!gf) continue;
      const auto im = D.composite(F.on(MorId{g}), F.on(MorId{f}));
      if (!im || F.on(*gf) != *im) {
        report.add("composition preservation",
                   "(" + C.morphisms[g].name + ", " + C.morphisms[f].name +
                       ")");
      }
    }
  }
  return report;
}

FinFunctor identity_functor(FinCategoryPtr C) {
  FinFunctor F;
  F.name = "id_" + C->name;
  F.source = C;
  F.target = C;
  F.obj_map.resize(C->object_count());
  F.mor_map.resize(C->morphism_count());
  for (std::uint32_t i = 0; i < C->object_count(); ++i) F.obj_map[i] = ObjId{i};
  for (std::uint32_t i = 0; i < C->morphism_count(); ++i)
    F.mor_map[i] = MorId{i};
  return F;
}

FinFunctor constant_functor(std::string name, FinCategoryPtr source,
                            FinCategoryPtr target, ObjId at) {
  FinFunctor F;
  F.name = std::move(name);
  F.source = source;
  F.target = target;
  F.obj_map.assign(source->object_count(), at);
  F.mor_map.assign(source->morphism_count(), target->identity(at));
  return F;
}

FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F) {
  if (*F.target != *G.source) {
    throw SourceTargetMismatch("cannot compose " + G.name + " after " + F.name);
  }
  FinFunctor H;
  H.name = G.name + "*" + F.name;
  H.source = F.source;
  H.target = G.target;
  H.obj_map.reserve(F.obj_map.size());
  H.mor_map.reserve(F.mor_map.size());
  for (const auto x : F.obj_map) H.obj_map.push_back(G.on(x));
  for (const auto f : F.mor_map) H.mor_map.push_back(G.on(f));
  return H;
}

bool FinNatTrans::operator==(const FinNatTrans& o) const {
  return name == o.name && from == o.from && to == o.to &&
         components == o.components;
}

ValidationReport validate_nat_trans(const FinNatTrans& a) {
  ValidationReport report;
  if (*a.from.source != *a.to.source || *a.from.target != *a.to.target) {
    report.add("functors do not share source and target", a.name);
    return report;
  }
  const auto& C = *a.from.source;
  const auto& D = *a.from.target;
  if (a.components.size() != C.object_count()) {
    report.add("component family not total", a.name);
    return report;
  }
  for (std::uint32_t x = 0; x < C.object_count(); ++x) {
    const auto c = a.components[x];
    if (c.value >= D.morphism_count()) {
      report.add("component out of range at " + C.objects[x], "");
      return report;
    }
    const auto& mc = D.mor(c);
    if (mc.dom != a.from.on(ObjId{x}) || mc.cod != a.to.on(ObjId{x})) {
      report.add("component endpoints at " + C.objects[x], mc.name);
    }
  }
  if (!report.ok()) return report;
  for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
    const auto& mf = C.morphisms[f];
    const auto lhs = D.composite(a.to.on(MorId{f}), a.at(mf.dom));
    const auto rhs = D.composite(a.at(mf.cod), a.from.on(MorId{f}));
    if (!lhs || !rhs || *lhs != *rhs) {
      report.add("naturality at " + mf.name, "");
    }
  }
  return report;
}

CommaCategory comma_category(ObjId d, const FinFunctor& F) {
  const auto& M = *F.source;
  const auto& D = *F.target;
  if (d.value >= D.object_count()) {
    throw UnknownObject("comma base object not in " + D.name);
  }

  CommaCategory result;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> obj_lookup;
  std::vector<std::string> obj_names;
  for (std::uint32_t m = 0; m < M.object_count(); ++m) {
    for (const auto f : hom(D, d, F.on(ObjId{m}))) {
      obj_lookup[{m, f.value}] =
          static_cast<std::uint32_t>(result.object_labels.size());
      result.object_labels.push_back({ObjId{m}, f});
      obj_names.push_back(pair_name(M.objects[m], D.mor(f).name));
    }
  }

  // A morphism out of (m, f) is determined by a u : m → m' of M; its
  // target is (cod u, F(u)∘f).
  struct Pending {
    std::uint32_t src;
    std::uint32_t dst;
    MorId u;
  };
  std::vector<Pending> pending;
  std::vector<Morphism> declared;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mor_lookup;
  const auto id_count = static_cast<std::uint32_t>(result.object_labels.size());
  for (std::uint32_t i = 0; i < result.object_labels.size(); ++i) {
    const auto [m, f] = result.object_labels[i];
    for (std::uint32_t u = 0; u < M.morphism_count(); ++u) {
      if (M.is_identity(MorId{u}) || M.morphisms[u].dom != m) continue;
      const auto fu = compose(D, F.on(MorId{u}), f);
      const auto j = obj_lookup.at({M.morphisms[u].cod.value, fu.value});
      mor_lookup[{i, u}] =
          id_count + static_cast<std::uint32_t>(declared.size());
      declared.push_back({M.morphisms[u].name + "@" + obj_names[i], ObjId{i},
                          ObjId{j}});
      pending.push_back({i, j, MorId{u}});
    }
  }

  auto base = make_category("comma(" + D.object_name(d) + "," + F.name + ")",
                            obj_names, declared);
  result.morphism_labels.resize(base.morphism_count());
  for (std::uint32_t i = 0; i < id_count; ++i) {
    result.morphism_labels[i] = M.identity(result.object_labels[i].first);
  }
  for (std::uint32_t k = 0; k < pending.size(); ++k) {
    result.morphism_labels[id_count + k] = pending[k].u;
  }

  for (std::uint32_t a = 0; a < pending.size(); ++a) {
    for (std::uint32_t b = 0; b < pending.size(); ++b) {
      if (pending[a].dst != pending[b].src) continue;
      const auto vu = compose(M, pending[b].u, pending[a].u);
      MorId entry;
      if (M.is_identity(vu)) {
        entry = base.identity(ObjId{pending[a].src});
      } else {
        entry = MorId{mor_lookup.at({pending[a].src, vu.value})};
      }
      set_composite(base, MorId{id_count + b}, MorId{id_count + a}, entry);
    }
  }

  result.category = std::make_shared<const FinCategory>(std::move(base));
  return result;
}

std::vector<ObjId> initial_objects(const FinCategory& C) {
  std::vector<ObjId> out;
  for (std::uint32_t x = 0; x < C.object_count(); ++x) {
    bool initial = true;
    for (std::uint32_t y = 0; y < C.object_count() && initial; ++y) {
      std::size_t count = 0;
      for (const auto& m : C.morphisms) {
        if (m.dom == ObjId{x} && m.cod == ObjId{y}) ++count;
      }
      initial = count == 1;
    }
    if (initial) out.push_back(ObjId{x});
  }
  return out;
}

ProductCategory product_category(FinCategoryPtr left, FinCategoryPtr right) {
  const auto& L = *left;
  const auto& R = *right;
  ProductCategory P;

  std::vector<std::string> obj_names;
  P.object_index.assign(L.object_count(),
                        std::vector<std::uint32_t>(R.object_count(), 0));
  for (std::uint32_t i = 0; i < L.object_count(); ++i) {
    for (std::uint32_t j = 0; j < R.object_count(); ++j) {
      P.object_index[i][j] = static_cast<std::uint32_t>(P.object_labels.size());
      P.object_labels.push_back({ObjId{i}, ObjId{j}});
      obj_names.push_back(pair_name(L.objects[i], R.objects[j]));
    }
  }

  const auto id_count = static_cast<std::uint32_t>(P.object_labels.size());
  P.morphism_index.assign(L.morphism_count(),
                          std::vector<std::uint32_t>(R.morphism_count(), 0));
  std::vector<Morphism> declared;
  for (std::uint32_t s = 0; s < L.morphism_count(); ++s) {
    for (std::uint32_t t = 0; t < R.morphism_count(); ++t) {
      if (L.is_identity(MorId{s}) && R.is_identity(MorId{t})) {
        P.morphism_index[s][t] =
            P.object_index[L.morphisms[s].dom.value][R.morphisms[t].dom.value];
        continue;
      }
      P.morphism_index[s][t] =
          id_count + static_cast<std::uint32_t>(declared.size());
      declared.push_back(
          {pair_name(L.morphisms[s].name, R.morphisms[t].name),
           ObjId{P.object_index[L.morphisms[s].dom.value]
                               [R.morphisms[t].dom.value]},
           ObjId{P.object_index[L.morphisms[s].cod.value]
                               [R.morphisms[t].cod.value]}});
    }
  }

  auto base =
      make_category("product(" + L.name + "," + R.name + ")", obj_names,
                    declared);
  P.morphism_labels.resize(base.morphism_count());
  for (std::uint32_t s = 0; s < L.morphism_count(); ++s) {
    for (std::uint32_t t = 0; t < R.morphism_count(); ++t) {
      P.morphism_labels[P.morphism_index[s][t]] = {MorId{s}, MorId{t}};
    }
  }

  for (std::uint32_t s1 = 0; s1 < L.morphism_count(); ++s1) {
    for (std::uint32_t t1 = 0; t1 < R.morphism_count(); ++t1) {
      for (std::uint32_t s2 = 0; s2 < L.morphism_count(); ++s2) {
        if (!L.composable(MorId{s2}, MorId{s1})) continue;
        const auto s21 = L.composite(MorId{s2}, MorId{s1});
        for (std::uint32_t t2 = 0; t2 < R.morphism_count(); ++t2) {
          if (!R.composable(MorId{t2}, MorId{t1})) continue;
          const auto t21 = R.composite(MorId{t2}, MorId{t1});
          if (!s21 || !t21) continue;
          set_composite(base, MorId{P.morphism_index[s2][t2]},
                        MorId{P.morphism_index[s1][t1]},
                        MorId{P.morphism_index[s21->value][t21->value]});
        }
      }
    }
  }

  P.category = std::make_shared<const FinCategory>(std::move(base));
  return P;
}

namespace {

FinFunctor product_projection(const ProductCategory& P, bool right_factor,
                              FinCategoryPtr target, std::string name) {
  FinFunctor F;
  F.name = std::move(name);
  F.source = P.category;
  F.target = std::move(target);
  F.obj_map.reserve(P.object_labels.size());
  for (const auto& [a, b] : P.object_labels) {
    F.obj_map.push_back(right_factor ? b : a);
  }
  F.mor_map.reserve(P.morphism_labels.size());
  for (const auto& [s, t] : P.morphism_labels) {
    F.mor_map.push_back(right_factor ? t : s);
  }
  return F;
}

}  // namespace

FinFunctor product_left_unitor(const ProductCategory& P,
                               FinCategoryPtr right_factor) {
  return product_projection(P, true, std::move(right_factor), "l");
}

FinFunctor product_right_unitor(const ProductCategory& P,
                                FinCategoryPtr left_factor) {
  return product_projection(P, false, std::move(left_factor), "r");
}

FinFunctor product_associator(FinCategoryPtr C, FinCategoryPtr D,
                              FinCategoryPtr E) {
  const auto cd = product_category(C, D);
  const auto cd_e = product_category(cd.category, E);
  const auto de = product_category(D, E);
  const auto c_de = product_category(C, de.category);

  FinFunctor F;
  F.name = "associator";
  F.source = cd_e.category;
  F.target = c_de.category;
  F.obj_map.reserve(cd_e.object_labels.size());
  for (const auto& [cdo, eo] : cd_e.object_labels) {
    const auto [co, do_] = cd.object_labels[cdo.value];
    F.obj_map.push_back(
        c_de.pair_object(co, de.pair_object(do_, eo)));
  }
  F.mor_map.reserve(cd_e.morphism_labels.size());
  for (const auto& [cdm, em] : cd_e.morphism_labels) {
    const auto [cm, dm] = cd.morphism_labels[cdm.value];
    F.mor_map.push_back(
        c_de.pair_morphism(cm, de.pair_morphism(dm, em)));
  }
  return F;
}

FunctorEnumerator::FunctorEnumerator(FinCategoryPtr source,
                                     FinCategoryPtr target, Budget budget)
    : source_(std::move(source)), target_(std::move(target)) {
  const auto obj_space =
      sat_pow(target_->object_count(), source_->object_count());
  const auto declared = source_->morphism_count() - source_->object_count();
  const auto mor_space = sat_pow(target_->morphism_count(), declared);
  estimate_ = sat_mul(obj_space, mor_space);
  if (estimate_ > budget.limit) throw BudgetExceeded(estimate_);
}

bool FunctorEnumerator::first_layout() {
  obj_choice_.assign(source_->object_count(), 0);
  if (source_->object_count() > 0 && target_->object_count() == 0) {
    return false;
  }
  while (!rebuild_candidates()) {
    if (!bump_objects()) return false;
  }
  return true;
}

bool FunctorEnumerator::next_layout() {
  do {
    if (!bump_objects()) return false;
  } while (!rebuild_candidates());
  return true;
}

bool FunctorEnumerator::bump_objects() {
  for (std::size_t i = 0; i < obj_choice_.size(); ++i) {
    if (++obj_choice_[i] < target_->object_count()) return true;
    obj_choice_[i] = 0;
  }
  return false;
}

bool FunctorEnumerator::rebuild_candidates() {
  const auto& C = *source_;
  const auto& D = *target_;
  candidates_.clear();
  for (std::uint32_t f = static_cast<std::uint32_t>(C.object_count());
       f < C.morphism_count(); ++f) {
    const auto& mf = C.morphisms[f];
    auto cands = hom(D, ObjId{obj_choice_[mf.dom.value]},
                     ObjId{obj_choice_[mf.cod.value]});
    if (cands.empty()) return false;
    candidates_.push_back(std::move(cands));
  }
  mor_choice_.assign(candidates_.size(), 0);
  mor_live_ = true;
  return true;
}

bool FunctorEnumerator::step_morphisms() {
  for (std::size_t i = 0; i < mor_choice_.size(); ++i) {
    if (++mor_choice_[i] < candidates_[i].size()) return true;
    mor_choice_[i] = 0;
  }
  return false;
}

FinFunctor FunctorEnumerator::current() {
  const auto& C = *source_;
  FinFunctor F;
  F.name = "F" + std::to_string(emitted_);
  F.source = source_;
  F.target = target_;
  F.obj_map.reserve(C.object_count());
  for (const auto o : obj_choice_) F.obj_map.push_back(ObjId{o});
  F.mor_map.resize(C.morphism_count());
  for (std::uint32_t x = 0; x < C.object_count(); ++x) {
    F.mor_map[x] = target_->identity(F.obj_map[x]);
  }
  for (std::size_t k = 0; k < candidates_.size(); ++k) {
    F.mor_map[C.object_count() + k] = candidates_[k][mor_choice_[k]];
  }
  return F;
}

bool FunctorEnumerator::laws_hold(const FinFunctor& F) const {
  const auto& C = *source_;
  const auto& D = *target_;
  for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
    if (C.is_identity(MorId{g})) continue;
    for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
      if (C.is_identity(MorId{f})) continue;
      if (!C.composable(MorId{g}, MorId{f})) continue;
      const auto gf = C.composite(MorId{g}, MorId{f});
      if (!gf) return false;
      const auto im = D.composite(F.on(MorId{g}), F.on(MorId{f}));
      if (!im || F.on(*gf) != *im) return false;
    }
  }
  return true;
}

std::optional<FinFunctor> FunctorEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    if (!first_layout()) {
      done_ = true;
      return std::nullopt;
    }
  }
  while (true) {
    if (mor_live_) {
      auto F = current();
      mor_live_ = step_morphisms();
      if (laws_hold(F)) {
        ++emitted_;
        return F;
      }
      continue;
    }
    if (!next_layout()) {
      done_ = true;
      return std::nullopt;
    }
  }
}

std::vector<FinFunctor> enumerate_functors(FinCategoryPtr source,
                                           FinCategoryPtr target,
                                           Budget budget) {
  FunctorEnumerator it(std::move(source), std::move(target), budget);
  std::vector<FinFunctor> out;
  while (auto F = it.next()) out.push_back(std::move(*F));
  return out;
}

}  // namespace kanopt
