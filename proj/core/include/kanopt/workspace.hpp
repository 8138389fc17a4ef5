#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kanopt/error.hpp"
#include "kanopt/fincat.hpp"
#include "kanopt/ordmon.hpp"
#include "kanopt/twocat.hpp"
#include "kanopt/univ.hpp"
#include "kanopt/validation.hpp"

namespace kanopt {

struct ParseDiagnostic {
  int line = 0;
  int col = 0;
  std::string message;
  bool operator==(const ParseDiagnostic&) const = default;
};

// Named declarations of one instance file. Names are unique per kind and
// blocks may only reference declarations made earlier in the file.
struct Workspace {
  std::vector<std::pair<std::string, std::string>> block_order;  // (kind, name)

  std::map<std::string, FinCategoryPtr> categories;
  std::map<std::string, MonoidalPreorderPtr> preorders;
  std::map<std::string, FinFunctor> functors;
  std::map<std::string, FinNatTrans> nat_transes;
  std::map<std::string, ErrorFlavour> errors;
  std::map<std::string, SetErrorProblem> set_problems;
  std::map<std::string, LossProblem> loss_problems;
  std::map<std::string, Fin2CategoryPtr> two_categories;
  std::map<std::string, ExtensionProblem> extensions;

  bool operator==(const Workspace& o) const;
};

struct ParseResult {
  Workspace workspace;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// Total: collects diagnostics with positions instead of stopping at the
// first error. A block that fails to resolve is skipped whole.
ParseResult parse_workspace(std::string_view text);

// Canonical text form; the fixed point of parse ∘ serialise.
std::string serialise(const Workspace& ws);

// Content hash (hex) of the canonical serialisation.
std::string workspace_digest(const Workspace& ws);

// Runs every declaration through its validator, prefixing rules with
// "<kind> <name>: ".
ValidationReport validate_workspace(const Workspace& ws);

}  // namespace kanopt
