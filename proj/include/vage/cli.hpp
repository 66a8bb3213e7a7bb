#pragma once

#include <iosfwd>

namespace vage::cli {

/// Exit codes: 0 success, 2 usage error, 3 domain or precondition error,
/// 4 numeric non-convergence.
enum ExitCode { kOk = 0, kUsage = 2, kDomain = 3, kNumeric = 4 };

/// Runs the command line `argv` (argv[0] is the program name). Results go
/// to `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vage::cli
