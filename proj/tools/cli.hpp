#pragma once

#include <iosfwd>

namespace flipproc::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  /// Not equivalent, not unique, condition fails, or tolerance exceeded.
  kNegative = 1,
  kInputError = 2,
  kResourceCap = 3,
  /// Numerical or internal failure (integration left [0,1], witness check).
  kInternal = 4,
};

/// Runs one invocation. Machine output goes to `out` (or to --out files),
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flipproc::cli
