#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumeric = 2;

// Bounds the `oracle` subcommand holds the Frank-Wolfe answer to.
inline constexpr double kOracleEntropyBound = 1e-6;
inline constexpr double kOracleLinfBound = 1e-4;

// Runs the tool on `args` (args[0] is the program name). Results go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evt::cli
