#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsm::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kCertificationFailed = 2,
  kSolverFailed = 3,
};

/// Runs the command line `args` (program name excluded). Normal output goes to
/// `out` unless --out redirects it; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsm::cli
