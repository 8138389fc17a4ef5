#include "kanopt/validation.hpp"

#include <limits>

namespace kanopt {

void ValidationReport::merge(const ValidationReport& other,
                             const std::string& prefix) {
  for (const auto& v : other.violations) {
    violations.push_back({prefix + v.rule, v.witness});
  }
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.rule;
    if (!v.witness.empty()) out += " [" + v.witness + "]";
  }
  return out;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (a > kMax / b) return kMax;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out = sat_mul(out, base);
  return out;
}

}  // namespace kanopt
