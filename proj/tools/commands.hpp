#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace markovmono::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kNotIrreducible = 3,
  kConditionsViolated = 4,
};

/// Runs the command line `args` (args[0] is the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace markovmono::cli
