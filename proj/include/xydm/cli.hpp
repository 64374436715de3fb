#pragma once

#include <iosfwd>

namespace xydm::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kAcceptanceFailure = 1,
  kUsage = 2,
  kNumerical = 3,
  kOracleViolation = 4,
};

/// Entry point for the xydm executable; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xydm::cli
