#pragma once

#include <iosfwd>

namespace reactest {

/// Exit codes of the `check` command; other commands use 0 and 2.
enum ExitCode : int {
    kExitEquivalent = 0,
    kExitDifferent = 1,
    kExitError = 2,
    kExitDisagreement = 3,
};

/// The command-line tool. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace reactest
