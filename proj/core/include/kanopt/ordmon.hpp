#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kanopt/rational.hpp"
#include "kanopt/validation.hpp"

namespace kanopt {

// A value of the error algebra: a token into a finite carrier, or a
// non-negative rational for the built-in carriers.
struct ErrorValue {
  std::variant<std::string, Rational> v;

  ErrorValue() : v(Rational{0}) {}
  explicit ErrorValue(std::string token) : v(std::move(token)) {}
  explicit ErrorValue(Rational r) : v(std::move(r)) {}

  bool is_token() const { return v.index() == 0; }
  const std::string& token() const { return std::get<0>(v); }
  const Rational& rational() const { return std::get<1>(v); }
  std::string str() const;

  bool operator==(const ErrorValue&) const = default;
};

struct FiniteCarrier {
  static constexpr std::uint32_t no_entry = 0xffffffffu;

  std::vector<std::string> elements;
  std::uint32_t unit = 0;
  std::vector<std::vector<std::uint32_t>> op;
  std::vector<std::vector<bool>> leq;  // includes the diagonal

  bool operator==(const FiniteCarrier&) const = default;
};

// Monoidal preorder: the algebra of error values. Either an explicit
// finite table or one of three built-in carriers over the non-negative
// rationals (max with unit 0, plus with unit 0, or boolean "or" on {0,1}).
struct MonoidalPreorder {
  enum class Kind { finite, max_rational, plus_rational, bool_or };

  std::string name;
  Kind kind = Kind::max_rational;
  FiniteCarrier carrier;  // meaningful only for Kind::finite

  bool operator==(const MonoidalPreorder&) const = default;
};

using MonoidalPreorderPtr = std::shared_ptr<const MonoidalPreorder>;

ValidationReport validate_monoidal_preorder(const MonoidalPreorder& S);

ErrorValue unit_value(const MonoidalPreorder& S);
bool carrier_contains(const MonoidalPreorder& S, const ErrorValue& a);
ErrorValue tensor(const MonoidalPreorder& S, const ErrorValue& a,
                  const ErrorValue& b);
bool leq(const MonoidalPreorder& S, const ErrorValue& a, const ErrorValue& b);

bool is_positive_monoid(const MonoidalPreorder& S);
bool unit_is_bottom(const MonoidalPreorder& S);

// Sampling hook for property tests: the full carrier when finite, a
// bounded grid of rationals for the built-ins.
std::vector<ErrorValue> carrier_sample(const MonoidalPreorder& S,
                                       int max_numerator = 4,
                                       int max_denominator = 3);

}  // namespace kanopt
