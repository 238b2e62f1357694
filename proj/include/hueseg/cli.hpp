#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hueseg::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Process exit codes. Stable; scripts depend on them.
enum ExitCode : int {
  kOk = 0,
  kIoError = 2,
  kConfigError = 3,
  kDimensionMismatch = 4,
  kPartialFailure = 5,
};

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hueseg::cli
