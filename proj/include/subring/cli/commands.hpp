#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subring::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitMismatch = 2,
    kExitBudget = 3,
    kExitIntegrity = 4,
};

/// Runs the command line `args` (program name excluded), writing results to
/// `out` and diagnostics to `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace subring::cli
