#pragma once

#include <iosfwd>

namespace cavicool::cli {

enum ExitCode : int {
  kOk = 0,
  kComputationError = 1,
  kInvalidConfig = 2,
  kSweepFailures = 3,
};

// Parses argv, dispatches the subcommand and writes results to --out (or
// `out` when no path is given). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cavicool::cli
