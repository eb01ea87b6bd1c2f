#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homopart {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitInfeasible = 3 };

/// Runs one subcommand. `args` excludes the program name. The summary line
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace homopart
