#include "kanopt/generate.hpp"

#include <algorithm>

namespace kanopt {

std::uint64_t Rng::next() {
  // SplitMix64; pinned so identical seeds give identical instances on any
  // platform.
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint32_t Rng::below(std::uint32_t n) {
  return n == 0 ? 0 : static_cast<std::uint32_t>(next() % n);
}

bool Rng::coin(std::uint32_t permille) { return below(1000) < permille; }

namespace {

constexpr std::uint32_t kHardCap = 6;

void check_bounds(const GenBounds& b) {
  if (b.max_models == 0 || b.max_data == 0 || b.max_objects == 0 ||
      b.max_models > kHardCap || b.max_data > kHardCap ||
      b.max_objects > kHardCap) {
    throw BoundsTooLarge("generator bounds must lie in [1, " +
                         std::to_string(kHardCap) + "]");
  }
}

Rational random_error_value(Rng& rng) {
  const long long q = 1 + rng.below(3);
  const long long p = rng.below(static_cast<std::uint32_t>(9 * q + 1));
  return Rational(p, q);
}

struct Poset {
  std::vector<std::vector<bool>> le;  // reflexive-transitive, upward in index
};

Poset random_poset(Rng& rng, std::uint32_t n, std::uint32_t edge_permille) {
  Poset p;
  p.le.assign(n, std::vector<bool>(n, false));
  for (std::uint32_t i = 0; i < n; ++i) p.le[i][i] = true;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.coin(edge_permille)) p.le[i][j] = true;
    }
  }
  for (std::uint32_t k = 0; k < n; ++k) {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (p.le[i][k] && p.le[k][j]) p.le[i][j] = true;
      }
    }
  }
  return p;
}

FinCategoryPtr poset_category(const std::string& name,
                              const std::vector<std::string>& objects,
                              const Poset& p) {
  std::vector<Morphism> mors;
  for (std::uint32_t i = 0; i < objects.size(); ++i) {
    for (std::uint32_t j = 0; j < objects.size(); ++j) {
      if (i != j && p.le[i][j]) {
        mors.push_back(
            {"le_" + objects[i] + "_" + objects[j], ObjId{i}, ObjId{j}});
      }
    }
  }
  auto C = make_category(name, objects, mors);
  for (std::uint32_t a = 0; a < C.morphism_count(); ++a) {
    if (C.is_identity(MorId{a})) continue;
    for (std::uint32_t b = 0; b < C.morphism_count(); ++b) {
      if (C.is_identity(MorId{b})) continue;
      if (!C.composable(MorId{b}, MorId{a})) continue;
      const auto i = C.mor(MorId{a}).dom;
      const auto k = C.mor(MorId{b}).cod;
      const auto composite = C.find_morphism(
          "le_" + objects[i.value] + "_" + objects[k.value]);
      set_composite(C, MorId{b}, MorId{a}, *composite);
    }
  }
  return std::make_shared<const FinCategory>(std::move(C));
}

// Random lax table over {0,1,2} and max: raise composite values until the
// lax inequality holds everywhere.
LaxErrorAssignment random_lax_error(Rng& rng, const std::string& name,
                                    FinCategoryPtr category,
                                    MonoidalPreorderPtr values) {
  LaxErrorAssignment E;
  E.name = name;
  E.category = category;
  E.values = values;
  const auto& C = *category;
  E.table.assign(C.morphism_count(), ErrorValue{Rational{0}});
  E.declared.assign(C.morphism_count(), true);
  for (std::uint32_t m = static_cast<std::uint32_t>(C.object_count());
       m < C.morphism_count(); ++m) {
    E.table[m] = ErrorValue{Rational{rng.below(3)}};
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
      for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
        if (!C.composable(MorId{g}, MorId{f})) continue;
        const auto gf = C.composite(MorId{g}, MorId{f});
        if (!gf) continue;
        const auto bound = tensor(*values, E.table[g], E.table[f]);
        if (!leq(*values, bound, E.at(*gf))) {
          E.table[gf->value] = bound;
          changed = true;
        }
      }
    }
  }
  return E;
}

std::vector<std::string> numbered(const std::string& prefix,
                                  std::uint32_t count,
                                  std::uint32_t from = 1) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    out.push_back(prefix + std::to_string(from + i));
  }
  return out;
}

Workspace generate_set(const GenBounds& bounds, Rng& rng) {
  Workspace ws;
  SetErrorProblem P;
  P.name = "P";
  P.models = numbered("m", 1 + rng.below(bounds.max_models));
  P.data = numbered("d", 1 + rng.below(bounds.max_data));
  P.inf.resize(P.models.size());
  for (auto& d : P.inf) d = rng.below(static_cast<std::uint32_t>(P.data.size()));
  P.fill = random_error_value(rng);
  P.target = rng.below(static_cast<std::uint32_t>(P.data.size()));
  P.err.assign(P.data.size(), std::vector<Rational>(P.data.size(), P.fill));
  for (std::size_t a = 0; a < P.data.size(); ++a) {
    for (std::size_t b = 0; b < P.data.size(); ++b) {
      P.err[a][b] = a == b ? Rational{0} : random_error_value(rng);
    }
  }
  ws.set_problems["P"] = std::move(P);
  ws.block_order.push_back({"setproblem", "P"});
  return ws;
}

Workspace generate_cat(const GenBounds& bounds, Rng& rng) {
  Workspace ws;
  const auto n = 1 + rng.below(bounds.max_objects);
  const auto data_names = numbered("d", n);
  const auto poset = random_poset(rng, n, 450);
  auto D = poset_category("D", data_names, poset);

  // A monotone idempotent inflation picks out a full subcategory whose
  // inclusion has a left adjoint by construction.
  std::vector<std::uint32_t> closure(n);
  bool ok = false;
  for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
    for (std::uint32_t x = 0; x < n; ++x) {
      std::vector<std::uint32_t> ups;
      for (std::uint32_t y = 0; y < n; ++y) {
        if (poset.le[x][y]) ups.push_back(y);
      }
      closure[x] = ups[rng.below(static_cast<std::uint32_t>(ups.size()))];
    }
    ok = true;
    for (std::uint32_t x = 0; x < n && ok; ++x) {
      if (closure[closure[x]] != closure[x]) ok = false;
      for (std::uint32_t y = 0; y < n && ok; ++y) {
        if (poset.le[x][y] && !poset.le[closure[x]][closure[y]]) ok = false;
      }
    }
  }
  if (!ok) {
    for (std::uint32_t x = 0; x < n; ++x) closure[x] = x;
  }

  std::vector<std::uint32_t> fixed;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (closure[x] == x) fixed.push_back(x);
  }
  std::vector<std::string> model_names;
  for (const auto x : fixed) model_names.push_back(data_names[x]);
  Poset sub;
  sub.le.assign(fixed.size(), std::vector<bool>(fixed.size(), false));
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    for (std::size_t j = 0; j < fixed.size(); ++j) {
      sub.le[i][j] = poset.le[fixed[i]][fixed[j]];
    }
  }
  auto M = poset_category("M", model_names, sub);

  FinFunctor inf;
  inf.name = "Inf";
  inf.source = M;
  inf.target = D;
  for (const auto x : fixed) inf.obj_map.push_back(ObjId{x});
  inf.mor_map.resize(M->morphism_count());
  for (std::uint32_t s = 0; s < M->morphism_count(); ++s) {
    const auto& mor = M->mor(MorId{s});
    if (M->is_identity(MorId{s})) {
      inf.mor_map[s] = D->identity(inf.obj_map[mor.dom.value]);
    } else {
      inf.mor_map[s] = *D->find_morphism(
          "le_" + data_names[fixed[mor.dom.value]] + "_" +
          data_names[fixed[mor.cod.value]]);
    }
  }

  auto S = std::make_shared<const MonoidalPreorder>(
      MonoidalPreorder{"S", MonoidalPreorder::Kind::max_rational, {}});
  auto E = random_lax_error(rng, "E", D, S);

  ws.categories["D"] = D;
  ws.categories["M"] = M;
  ws.preorders["S"] = S;
  ws.functors["Inf"] = std::move(inf);
  ws.errors.emplace("E", std::move(E));
  ws.block_order = {{"category", "D"},
                    {"category", "M"},
                    {"mpre", "S"},
                    {"functor", "Inf"},
                    {"error", "E"}};
  return ws;
}

Workspace generate_loss(const GenBounds& bounds, Rng& rng) {
  Workspace ws;

  // Phi: a poset with an explicit global bottom.
  const auto phi_upper = 1 + rng.below(bounds.max_objects);
  std::vector<std::string> phi_names = {"bot"};
  for (const auto& u : numbered("p", phi_upper)) phi_names.push_back(u);
  auto upper = random_poset(rng, phi_upper, 400);
  Poset phi_poset;
  const auto pn = phi_upper + 1;
  phi_poset.le.assign(pn, std::vector<bool>(pn, false));
  for (std::uint32_t i = 0; i < pn; ++i) phi_poset.le[i][i] = true;
  for (std::uint32_t j = 0; j < pn; ++j) phi_poset.le[0][j] = true;
  for (std::uint32_t i = 0; i < phi_upper; ++i) {
    for (std::uint32_t j = 0; j < phi_upper; ++j) {
      if (upper.le[i][j]) phi_poset.le[i + 1][j + 1] = true;
    }
  }
  auto Phi = poset_category("Phi", phi_names, phi_poset);

  // Domain: a poset, sometimes with its own least element so the Kan lift
  // exists on a fair share of instances.
  const auto dn = 1 + rng.below(bounds.max_objects);
  const auto dom_names = numbered("x", dn);
  auto dom_poset = random_poset(rng, dn, 450);
  if (rng.coin(500)) {
    for (std::uint32_t j = 0; j < dn; ++j) dom_poset.le[0][j] = true;
  }
  auto D = poset_category("D", dom_names, dom_poset);

  // Random monotone assignment; fall back to the constant bottom map.
  std::vector<std::uint32_t> image(dn, 0);
  bool ok = false;
  for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
    for (auto& v : image) v = rng.below(pn);
    ok = true;
    for (std::uint32_t i = 0; i < dn && ok; ++i) {
      for (std::uint32_t j = 0; j < dn && ok; ++j) {
        if (dom_poset.le[i][j] && !phi_poset.le[image[i]][image[j]]) ok = false;
      }
    }
  }
  if (!ok) image.assign(dn, 0);

  FinFunctor loss;
  loss.name = "Loss";
  loss.source = D;
  loss.target = Phi;
  for (const auto v : image) loss.obj_map.push_back(ObjId{v});
  loss.mor_map.resize(D->morphism_count());
  for (std::uint32_t s = 0; s < D->morphism_count(); ++s) {
    const auto& mor = D->mor(MorId{s});
    const auto a = loss.obj_map[mor.dom.value];
    const auto b = loss.obj_map[mor.cod.value];
    if (a == b) {
      loss.mor_map[s] = Phi->identity(a);
    } else {
      loss.mor_map[s] = *Phi->find_morphism(
          "le_" + phi_names[a.value] + "_" + phi_names[b.value]);
    }
  }

  // Any valid flavour on a bounded thin Phi is forced to the constant unit
  // table; the flavour kind still varies.
  const bool strict = rng.coin(500);
  MonoidalPreorderPtr S;
  if (strict) {
    S = std::make_shared<const MonoidalPreorder>(
        MonoidalPreorder{"S", MonoidalPreorder::Kind::bool_or, {}});
  } else {
    S = std::make_shared<const MonoidalPreorder>(
        MonoidalPreorder{"S", MonoidalPreorder::Kind::max_rational, {}});
  }
  LossProblem L;
  L.name = "L";
  L.domain = D;
  L.phi = Phi;
  L.loss = loss;
  L.bottom = ObjId{0};
  if (strict) {
    StrictErrorFunctor E;
    E.name = "E";
    E.category = Phi;
    E.values = S;
    E.table.assign(Phi->morphism_count(), ErrorValue{Rational{0}});
    E.declared.assign(Phi->morphism_count(), true);
    L.flavour = E;
    ws.errors.emplace("E", std::move(E));
  } else {
    LaxErrorAssignment E;
    E.name = "E";
    E.category = Phi;
    E.values = S;
    E.table.assign(Phi->morphism_count(), ErrorValue{Rational{0}});
    E.declared.assign(Phi->morphism_count(), true);
    L.flavour = E;
    ws.errors.emplace("E", std::move(E));
  }

  ws.categories["Phi"] = Phi;
  ws.categories["D"] = D;
  ws.preorders["S"] = S;
  ws.functors["Loss"] = std::move(loss);
  ws.loss_problems["L"] = std::move(L);
  ws.block_order = {{"category", "Phi"}, {"category", "D"}, {"mpre", "S"},
                    {"functor", "Loss"}, {"error", "E"},
                    {"lossproblem", "L"}};
  return ws;
}

}  // namespace

Workspace generate_instance(InstanceKind kind, const GenBounds& bounds,
                            std::uint64_t seed) {
  check_bounds(bounds);
  // Salt the stream per kind so different kinds never share a sequence.
  Rng rng(seed * 3 + static_cast<std::uint64_t>(kind) + 1);
  switch (kind) {
    case InstanceKind::set:
      return generate_set(bounds, rng);
    case InstanceKind::cat:
      return generate_cat(bounds, rng);
    case InstanceKind::loss:
      return generate_loss(bounds, rng);
  }
  throw Error("unreachable instance kind");
}

std::string generate_instance_text(InstanceKind kind, const GenBounds& bounds,
                                   std::uint64_t seed) {
  return serialise(generate_instance(kind, bounds, seed));
}

}  // namespace kanopt
