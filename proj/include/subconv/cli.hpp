#pragma once

#include <ostream>

namespace subconv {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUnexpected = 1,
    kExitConfig = 2,
    kExitNumerical = 3,   // non-finite value or domain exit during iteration
    kExitViolated = 4,    // a prediction failed its chain or monotonicity check
    kExitBound = 5,       // bound or envelope validation failed
    kExitFold = 6,        // fold consistency check failed
};

/// Entry point of the `subconv` tool; writes results to `out` and
/// diagnostics to `err`, returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subconv
