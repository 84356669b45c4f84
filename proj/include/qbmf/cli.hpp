#pragma once

// Command-line front end: point evaluation, z tables and the verification
// suites. Exit codes: 0 success, 1 check failure, 2 usage error,
// 3 domain or convergence error.

#include <ostream>

namespace qbmf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Parses argv (argv[0] is the program name) and runs the subcommand,
/// writing results to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbmf::cli
