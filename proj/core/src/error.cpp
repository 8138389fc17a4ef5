#include "kanopt/error.hpp"

#include <algorithm>

namespace kanopt {

bool LaxErrorAssignment::operator==(const LaxErrorAssignment& o) const {
  return name == o.name && *category == *o.category && *values == *o.values &&
         table == o.table;
}

bool StrictErrorFunctor::operator==(const StrictErrorFunctor& o) const {
  return name == o.name && *category == *o.category && *values == *o.values &&
         table == o.table;
}

namespace {

// Shared shape checks for both flavours of error table.
template <typename E>
bool table_well_formed(const E& err, ValidationReport& report) {
  const auto& C = *err.category;
  const auto& S = *err.values;
  if (err.table.size() != C.morphism_count()) {
    report.add("error table not total", err.name);
    return false;
  }
  bool usable = true;
  for (std::uint32_t m = 0; m < C.morphism_count(); ++m) {
    if (!err.declared.empty() && !err.declared[m] && !C.is_identity(MorId{m})) {
      report.add("missing value for morphism " + C.mor(MorId{m}).name, "");
      usable = false;
      continue;
    }
    if (!carrier_contains(S, err.table[m])) {
      report.add("value not in carrier at " + C.mor(MorId{m}).name,
                 err.table[m].str());
      usable = false;
    }
  }
  return usable;
}

}  // namespace

ValidationReport validate_lax_error(const LaxErrorAssignment& E) {
  ValidationReport report;
  const auto& C = *E.category;
  const auto& S = *E.values;
  if (!unit_is_bottom(S)) {
    report.add("carrier unit is not the bottom element", S.name);
  }
  if (!table_well_formed(E, report)) return report;

  const auto unit = unit_value(S);
  for (std::uint32_t x = 0; x < C.object_count(); ++x) {
    if (!leq(S, unit, E.at(C.identity(ObjId{x})))) {
      report.add("identity value below unit at " + C.objects[x], "");
    }
  }
  for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
    for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
      if (!C.composable(MorId{g}, MorId{f})) continue;
      const auto gf = C.composite(MorId{g}, MorId{f});
      if (!gf) continue;
      if (!leq(S, tensor(S, E.at(MorId{g}), E.at(MorId{f})), E.at(*gf))) {
        report.add("laxity",
                   "(" + C.morphisms[g].name + ", " + C.morphisms[f].name +
                       ")");
      }
    }
  }
  return report;
}

ValidationReport validate_strict_error(const StrictErrorFunctor& E) {
  if (!is_positive_monoid(*E.values)) {
    throw PositivityRequired("carrier " + E.values->name +
                             " is not a positive monoid");
  }
  ValidationReport report;
  const auto& C = *E.category;
  const auto& S = *E.values;
  if (!table_well_formed(E, report)) return report;

  const auto unit = unit_value(S);
  for (std::uint32_t x = 0; x < C.object_count(); ++x) {
    if (E.at(C.identity(ObjId{x})) != unit) {
      report.add("identity not mapped to unit at " + C.objects[x], "");
    }
  }
  for (std::uint32_t g = 0; g < C.morphism_count(); ++g) {
    for (std::uint32_t f = 0; f < C.morphism_count(); ++f) {
      if (!C.composable(MorId{g}, MorId{f})) continue;
      const auto gf = C.composite(MorId{g}, MorId{f});
      if (!gf) continue;
      if (E.at(*gf) != tensor(S, E.at(MorId{g}), E.at(MorId{f}))) {
        report.add("multiplicativity",
                   "(" + C.morphisms[g].name + ", " + C.morphisms[f].name +
                       ")");
      }
    }
  }
  return report;
}

ValidationReport validate_set_problem(const SetErrorProblem& P) {
  ValidationReport report;
  if (P.inf.size() != P.models.size()) {
    report.add("inference map not total", P.name);
    return report;
  }
  for (const auto d : P.inf) {
    if (d >= P.data.size()) {
      report.add("inference image out of range", P.name);
      return report;
    }
  }
  if (P.target >= P.data.size() && !P.data.empty()) {
    report.add("target not a data point", P.name);
  }
  if (P.err.size() != P.data.size()) {
    report.add("error table not dense", P.name);
    return report;
  }
  for (std::size_t d = 0; d < P.data.size(); ++d) {
    if (P.err[d].size() != P.data.size()) {
      report.add("error table not dense", P.name);
      return report;
    }
    if (!P.err[d][d].is_zero()) {
      report.add("diagonal error at " + P.data[d], P.err[d][d].str());
    }
    for (std::size_t e = 0; e < P.data.size(); ++e) {
      if (P.err[d][e].negative()) {
        report.add("negative error",
                   "(" + P.data[d] + ", " + P.data[e] + ")");
      }
    }
  }
  if (P.fill.negative()) report.add("negative fill value", P.fill.str());
  return report;
}

ValidationReport validate_cat_problem(const CatErrorProblem& P) {
  ValidationReport report;
  report.merge(validate_category(*P.models), "models: ");
  report.merge(validate_category(*P.data), "data: ");
  if (*P.inf.source != *P.models || *P.inf.target != *P.data) {
    report.add("inference functor endpoints mismatch", P.name);
  } else {
    report.merge(validate_functor(P.inf), "inference: ");
  }
  if (*P.error.category != *P.data) {
    report.add("error not assigned on the data category", P.name);
  } else {
    report.merge(validate_lax_error(P.error), "error: ");
  }
  if (P.target.value >= P.data->object_count()) {
    report.add("target not a data object", P.name);
  }
  return report;
}

bool error_leq_pairs(const LaxErrorAssignment& E, std::pair<ObjId, ObjId> src,
                     std::pair<ObjId, ObjId> dst) {
  const auto& C = *E.category;
  const auto& S = *E.values;
  const auto dst_hom = hom(C, dst.first, dst.second);
  if (dst_hom.empty()) return true;
  const auto src_hom = hom(C, src.first, src.second);
  for (const auto f : dst_hom) {
    bool matched = false;
    for (const auto g : src_hom) {
      if (leq(S, E.at(g), E.at(f))) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

ValidationReport check_comparison_preorder(const LaxErrorAssignment& E,
                                           const PairRelation& rel) {
  const PairRelation r = rel ? rel : PairRelation{[](const LaxErrorAssignment& e,
                                                     std::pair<ObjId, ObjId> a,
                                                     std::pair<ObjId, ObjId> b) {
    return error_leq_pairs(e, a, b);
  }};
  ValidationReport report;
  const auto& C = *E.category;
  const auto n = static_cast<std::uint32_t>(C.object_count());

  std::vector<std::pair<ObjId, ObjId>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = 0; y < n; ++y) {
      pairs.push_back({ObjId{x}, ObjId{y}});
    }
  }
  auto show = [&](std::pair<ObjId, ObjId> p) {
    return "(" + C.object_name(p.first) + "," + C.object_name(p.second) + ")";
  };
  for (const auto& p : pairs) {
    if (!r(E, p, p)) {
      report.add("comparison not reflexive", show(p));
    }
  }
  for (const auto& a : pairs) {
    for (const auto& b : pairs) {
      if (!r(E, a, b)) continue;
      for (const auto& c : pairs) {
        if (r(E, b, c) && !r(E, a, c)) {
          report.add("comparison not transitive",
                     show(a) + " " + show(b) + " " + show(c));
        }
      }
    }
  }
  return report;
}

SetMinimiserResult brute_force_minimisers_set(const SetErrorProblem& P) {
  SetMinimiserResult result;
  if (P.models.empty()) {
    result.empty_model_space = true;
    return result;
  }
  for (std::uint32_t m = 0; m < P.models.size(); ++m) {
    const auto& e = P.err[P.target][P.inf[m]];
    if (!result.error || e < *result.error) {
      result.error = e;
      result.minimisers.clear();
      result.minimisers.push_back(m);
    } else if (e == *result.error) {
      result.minimisers.push_back(m);
    }
  }
  return result;
}

std::vector<ObjId> brute_force_minimisers_cat(const CatErrorProblem& P) {
  std::vector<ObjId> out;
  const auto n = static_cast<std::uint32_t>(P.models->object_count());
  for (std::uint32_t x = 0; x < n; ++x) {
    bool least = true;
    for (std::uint32_t m = 0; m < n && least; ++m) {
      least = error_leq_pairs(P.error, {P.target, P.inf.on(ObjId{x})},
                              {P.target, P.inf.on(ObjId{m})});
    }
    if (least) out.push_back(ObjId{x});
  }
  return out;
}

bool flavoured_leq(const StrictErrorFunctor& E, ObjId x, ObjId y) {
  const auto unit = unit_value(*E.values);
  for (const auto f : hom(*E.category, x, y)) {
    if (E.at(f) == unit) return true;
  }
  return false;
}

bool flavoured_leq(const LaxErrorAssignment& E, ObjId x, ObjId y) {
  const auto unit = unit_value(*E.values);
  for (const auto f : hom(*E.category, x, y)) {
    if (leq(*E.values, E.at(f), unit)) return true;
  }
  return false;
}

bool flavoured_leq(const ErrorFlavour& E, ObjId x, ObjId y) {
  return std::visit([&](const auto& e) { return flavoured_leq(e, x, y); }, E);
}

LaxErrorEnumerator::LaxErrorEnumerator(FinCategoryPtr category,
                                       MonoidalPreorderPtr values,
                                       std::vector<ErrorValue> pool,
                                       Budget budget)
    : category_(std::move(category)),
      values_(std::move(values)),
      pool_(std::move(pool)) {
  const auto declared =
      category_->morphism_count() - category_->object_count();
  estimate_ = sat_pow(pool_.size(), declared);
  if (pool_.empty()) estimate_ = 0;
  if (estimate_ > budget.limit) throw BudgetExceeded(estimate_);
  if (pool_.empty()) {
    done_ = true;
  } else {
    choice_.assign(declared, 0);
  }
}

std::optional<LaxErrorAssignment> LaxErrorEnumerator::next() {
  const auto& C = *category_;
  while (!done_) {
    if (!fresh_) {
      bool moved = false;
      for (std::size_t i = 0; i < choice_.size(); ++i) {
        if (++choice_[i] < pool_.size()) {
          moved = true;
          break;
        }
        choice_[i] = 0;
      }
      if (!moved) {
        done_ = true;
        break;
      }
    }
    fresh_ = false;

    LaxErrorAssignment E;
    E.name = C.name + "_err" + std::to_string(emitted_);
    E.category = category_;
    E.values = values_;
    E.table.resize(C.morphism_count());
    const auto unit = unit_value(*values_);
    for (std::uint32_t x = 0; x < C.object_count(); ++x) E.table[x] = unit;
    for (std::size_t k = 0; k < choice_.size(); ++k) {
      E.table[C.object_count() + k] = pool_[choice_[k]];
    }
    if (validate_lax_error(E).ok()) {
      ++emitted_;
      return E;
    }
  }
  return std::nullopt;
}

std::vector<LaxErrorAssignment> enumerate_lax_errors(
    FinCategoryPtr category, MonoidalPreorderPtr values,
    const std::vector<ErrorValue>& pool, Budget budget) {
  LaxErrorEnumerator it(std::move(category), std::move(values), pool, budget);
  std::vector<LaxErrorAssignment> out;
  while (auto E = it.next()) out.push_back(std::move(*E));
  return out;
}

}  // namespace kanopt
