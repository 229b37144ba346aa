#pragma once

#include <ostream>

namespace fockarc {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNoPrediction = 3,
  kExitComputation = 4,
};

/// Entry point of the command-line tool. Reports go to `out` (or --out),
/// diagnostics to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fockarc
