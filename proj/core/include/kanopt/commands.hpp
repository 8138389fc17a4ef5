#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kanopt {

// Exit statuses of the command layer.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_parse = 2;
inline constexpr int exit_absent = 3;
inline constexpr int exit_budget = 4;

struct CliOptions {
  std::string command;
  std::string file;  // instance kind when command == "generate"
  std::string name;
  std::string mode = "strict";
  std::string emit;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  bool machine = false;
  bool no_timing = false;
  std::vector<std::string> echo;  // argv after the program name
};

struct CommandOutcome {
  int exit_code = 0;
  std::string output;  // complete stdout text
};

CommandOutcome run_command(const CliOptions& opts);

// Full command line front end; prints to `out` / `err` and returns the
// exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace kanopt
