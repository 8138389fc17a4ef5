#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kanopt {

// Exact rational arithmetic on small values. Always canonical: the
// denominator is positive and gcd(|num|, den) == 1.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long num, long long den);
  Rational(long long n) : num_(n) {}  // NOLINT: implicit by design

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool negative() const { return num_ < 0; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);

  bool operator==(const Rational& o) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

  std::string str() const;

  // Accepts "p" or "p/q" with non-negative p and positive q.
  static std::optional<Rational> parse(std::string_view text);

 private:
  long long num_ = 0;
  long long den_ = 1;
};

inline Rational max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

}  // namespace kanopt
