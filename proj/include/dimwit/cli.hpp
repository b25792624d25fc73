#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dimwit {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;  // invalid input, refused behaviour, infeasible or not found
inline constexpr int kExitUsage = 2;

/// Runs the command-line tool. `args` excludes the program name. JSON goes to
/// `out`, the human summary to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimwit
