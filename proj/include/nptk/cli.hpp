#pragma once

#include <ostream>

namespace nptk {

/// Exit codes besides 0.
enum ExitCode : int {
  exit_non_member = 1,
  exit_boundary = 2,
  exit_empty_feasible = 3,
  exit_usage = 64,
  exit_degenerate = 65,
  exit_internal = 70,
};

/// Command-line entry point. JSON reports go to `out` (or --out), messages
/// to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nptk
