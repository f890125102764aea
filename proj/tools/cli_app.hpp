#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cesrank::cli {

// Exit codes of the cesrank command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNoConvergence = 3;

// Runs the command line (args excludes the program name). Results go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cesrank::cli
