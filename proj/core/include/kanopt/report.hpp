#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kanopt/validation.hpp"

namespace kanopt {

// Machine-readable report with fixed key order. Values are scalars, flat
// lists, or string→string maps; enough for every command payload. Identical
// inputs produce byte-identical reports once timing is suppressed.
class Report {
 public:
  Report(std::string command_echo, std::string digest, std::string status);

  void set_scalar(const std::string& key, std::string value);
  void set_list(const std::string& key, std::vector<std::string> values);
  void set_map(const std::string& key,
               std::vector<std::pair<std::string, std::string>> entries);
  void set_findings(const ValidationReport& report);
  void set_diagnostics(const std::vector<std::string>& lines);
  void set_timing(std::int64_t ms);

  // Structured serialisation (versioned with a schema header).
  std::string machine_text() const;
  // Line-per-fact rendering for the terminal.
  std::string human_text() const;

 private:
  struct Entry {
    enum class Kind { scalar, list, map } kind;
    std::string key;
    std::string scalar;
    std::vector<std::string> list;
    std::vector<std::pair<std::string, std::string>> map;
  };

  std::string command_;
  std::string digest_;
  std::string status_;
  std::vector<Entry> payload_;
  std::vector<std::pair<std::string, std::string>> findings_;
  std::vector<std::string> diagnostics_;
  std::optional<std::int64_t> timing_ms_;
};

}  // namespace kanopt
