#pragma once

#include <iosfwd>

namespace varcont::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNotConverged = 2,
  kAcceptanceFailure = 3,
};

/// Entry point of the `varcont` tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varcont::cli
