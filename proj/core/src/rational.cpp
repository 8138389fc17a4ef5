#include "kanopt/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace kanopt {

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  const long long lhs = num_ * o.den_;
  const long long rhs = o.num_ * den_;
  return lhs <=> rhs;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!digits(text)) return std::nullopt;
    return Rational(std::stoll(std::string(text)), 1);
  }
  const auto p = text.substr(0, slash);
  const auto q = text.substr(slash + 1);
  if (!digits(p) || !digits(q)) return std::nullopt;
  const long long den = std::stoll(std::string(q));
  if (den == 0) return std::nullopt;
  return Rational(std::stoll(std::string(p)), den);
}

}  // namespace kanopt
