#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace delone {

/// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

/// Runs one CLI invocation; args excludes the program name. The report goes
/// to `out` (and to --out-dir when given), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace delone
