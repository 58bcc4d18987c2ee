#pragma once

#include <iosfwd>

namespace inscribed {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNotAttained = 2,
  kExitBoundViolation = 3,
};

/// Entry point of the inscribed-extrema tool: parses argv, runs one
/// subcommand and writes JSON to `out` (or --output). Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inscribed
