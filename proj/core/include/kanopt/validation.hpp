#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kanopt {

// Validators collect violations instead of throwing: a structure either
// passes with an empty report, or the report lists every broken axiom
// instance together with a witness.
struct Violation {
  std::string rule;
  std::string witness;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string rule, std::string witness) {
    violations.push_back({std::move(rule), std::move(witness)});
  }
  void merge(const ValidationReport& other, const std::string& prefix);
  std::string summary() const;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotComposable : Error { using Error::Error; };
struct MissingEntry : Error { using Error::Error; };
struct UnknownObject : Error { using Error::Error; };
struct UnknownElement : Error { using Error::Error; };
struct SourceTargetMismatch : Error { using Error::Error; };
struct CategoryMismatch : Error { using Error::Error; };
struct PositivityRequired : Error { using Error::Error; };
struct NonFunctorialAssembly : Error { using Error::Error; };
struct BoundsTooLarge : Error { using Error::Error; };

// Exhaustive searches refuse to start when the candidate-space estimate
// exceeds the budget; the estimate rides along in the exception.
struct BudgetExceeded : Error {
  std::uint64_t estimate;
  explicit BudgetExceeded(std::uint64_t est)
      : Error("search budget exceeded: estimated " + std::to_string(est) +
              " candidates"),
        estimate(est) {}
};

struct Budget {
  std::uint64_t limit = 1'000'000;
};

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp);

}  // namespace kanopt
