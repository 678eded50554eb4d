#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcs {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitParse = 2, kExitValidation = 3, kExitConsistency = 4 };

/// Runs the tool on argv-style arguments (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcs
