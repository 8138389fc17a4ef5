#include "kanopt/ordmon.hpp"

namespace kanopt {

std::string ErrorValue::str() const {
  if (is_token()) return token();
  return rational().str();
}

namespace {

std::uint32_t token_index(const MonoidalPreorder& S, const ErrorValue& a) {
  if (!a.is_token()) {
    throw UnknownElement("rational value in finite carrier " + S.name);
  }
  for (std::uint32_t i = 0; i < S.carrier.elements.size(); ++i) {
    if (S.carrier.elements[i] == a.token()) return i;
  }
  throw UnknownElement("element " + a.token() + " not in carrier " + S.name);
}

const Rational& rational_in(const MonoidalPreorder& S, const ErrorValue& a) {
  if (a.is_token()) {
    throw UnknownElement("token " + a.token() + " in builtin carrier " +
                         S.name);
  }
  const auto& r = a.rational();
  if (r.negative()) {
    throw UnknownElement("negative value in carrier " + S.name);
  }
  if (S.kind == MonoidalPreorder::Kind::bool_or && r != Rational{0} &&
      r != Rational{1}) {
    throw UnknownElement("value " + r.str() + " not in {0,1} carrier " +
                         S.name);
  }
  return r;
}

}  // namespace

ValidationReport validate_monoidal_preorder(const MonoidalPreorder& S) {
  ValidationReport report;
  if (S.kind != MonoidalPreorder::Kind::finite) {
    return report;  // builtin carriers satisfy the laws analytically
  }
  const auto& c = S.carrier;
  const auto n = c.elements.size();
  if (c.unit >= n) {
    report.add("unit not in carrier", S.name);
    return report;
  }
  if (c.op.size() != n || c.leq.size() != n) {
    report.add("tables not total", S.name);
    return report;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (c.op[a].size() != n || c.leq[a].size() != n) {
      report.add("tables not total", S.name);
      return report;
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (c.op[a][b] == FiniteCarrier::no_entry) {
        report.add("missing op entry",
                   "(" + c.elements[a] + ", " + c.elements[b] + ")");
      } else if (c.op[a][b] >= n) {
        report.add("op entry out of range",
                   "(" + c.elements[a] + ", " + c.elements[b] + ")");
      }
    }
  }
  if (!report.ok()) return report;

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t d = 0; d < n; ++d) {
        if (c.op[c.op[a][b]][d] != c.op[a][c.op[b][d]]) {
          report.add("op associativity",
                     "(" + c.elements[a] + ", " + c.elements[b] + ", " +
                         c.elements[d] + ")");
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (c.op[c.unit][a] != a || c.op[a][c.unit] != a) {
      report.add("unit law at " + c.elements[a], "");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!c.leq[a][a]) report.add("leq not reflexive at " + c.elements[a], "");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!c.leq[a][b]) continue;
      for (std::size_t d = 0; d < n; ++d) {
        if (c.leq[b][d] && !c.leq[a][d]) {
          report.add("leq not transitive",
                     "(" + c.elements[a] + ", " + c.elements[b] + ", " +
                         c.elements[d] + ")");
        }
      }
    }
  }
  // Monotonicity of the product in both arguments.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t a2 = 0; a2 < n; ++a2) {
      if (!c.leq[a][a2]) continue;
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t b2 = 0; b2 < n; ++b2) {
          if (!c.leq[b][b2]) continue;
          if (!c.leq[c.op[a][b]][c.op[a2][b2]]) {
            report.add("op not monotone",
                       "(" + c.elements[a] + "<=" + c.elements[a2] + ", " +
                           c.elements[b] + "<=" + c.elements[b2] + ")");
          }
        }
      }
    }
  }
  return report;
}

ErrorValue unit_value(const MonoidalPreorder& S) {
  if (S.kind == MonoidalPreorder::Kind::finite) {
    return ErrorValue{S.carrier.elements[S.carrier.unit]};
  }
  return ErrorValue{Rational{0}};
}

bool carrier_contains(const MonoidalPreorder& S, const ErrorValue& a) {
  switch (S.kind) {
    case MonoidalPreorder::Kind::finite:
      if (!a.is_token()) return false;
      for (const auto& e : S.carrier.elements) {
        if (e == a.token()) return true;
      }
      return false;
    case MonoidalPreorder::Kind::bool_or:
      return !a.is_token() &&
             (a.rational() == Rational{0} || a.rational() == Rational{1});
    default:
      return !a.is_token() && !a.rational().negative();
  }
}

ErrorValue tensor(const MonoidalPreorder& S, const ErrorValue& a,
                  const ErrorValue& b) {
  switch (S.kind) {
    case MonoidalPreorder::Kind::finite:
      return ErrorValue{
          S.carrier.elements[S.carrier.op[token_index(S, a)][token_index(S, b)]]};
    case MonoidalPreorder::Kind::plus_rational:
      return ErrorValue{rational_in(S, a) + rational_in(S, b)};
    case MonoidalPreorder::Kind::max_rational:
    case MonoidalPreorder::Kind::bool_or:
      return ErrorValue{max(rational_in(S, a), rational_in(S, b))};
  }
  throw UnknownElement("unreachable carrier kind");
}

bool leq(const MonoidalPreorder& S, const ErrorValue& a, const ErrorValue& b) {
  if (S.kind == MonoidalPreorder::Kind::finite) {
    return S.carrier.leq[token_index(S, a)][token_index(S, b)];
  }
  return rational_in(S, a) <= rational_in(S, b);
}

bool is_positive_monoid(const MonoidalPreorder& S) {
  if (S.kind != MonoidalPreorder::Kind::finite) {
    return true;  // max, plus and or reach 0 only from (0, 0)
  }
  const auto& c = S.carrier;
  for (std::size_t a = 0; a < c.elements.size(); ++a) {
    for (std::size_t b = 0; b < c.elements.size(); ++b) {
      if (c.op[a][b] == c.unit && (a != c.unit || b != c.unit)) return false;
    }
  }
  return true;
}

bool unit_is_bottom(const MonoidalPreorder& S) {
  if (S.kind != MonoidalPreorder::Kind::finite) {
    return true;  // 0 under the usual order on non-negative rationals
  }
  const auto& c = S.carrier;
  for (std::size_t a = 0; a < c.elements.size(); ++a) {
    if (!c.leq[c.unit][a]) return false;
  }
  return true;
}

std::vector<ErrorValue> carrier_sample(const MonoidalPreorder& S,
                                       int max_numerator,
                                       int max_denominator) {
  std::vector<ErrorValue> out;
  switch (S.kind) {
    case MonoidalPreorder::Kind::finite:
      for (const auto& e : S.carrier.elements) out.emplace_back(e);
      return out;
    case MonoidalPreorder::Kind::bool_or:
      out.emplace_back(Rational{0});
      out.emplace_back(Rational{1});
      return out;
    default:
      for (int q = 1; q <= max_denominator; ++q) {
        for (int p = 0; p <= max_numerator; ++p) {
          ErrorValue v{Rational(p, q)};
          bool seen = false;
          for (const auto& u : out) {
            if (u == v) {
              seen = true;
              break;
            }
          }
          if (!seen) out.push_back(std::move(v));
        }
      }
      return out;
  }
}

}  // namespace kanopt
