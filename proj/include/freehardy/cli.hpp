#pragma once

#include <iosfwd>
#include <string>

namespace freehardy {

// Exit codes of the batch front end.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitNegative = 2 };

// Parses argv, runs one subcommand, writes the report to --out or to `out`.
// Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freehardy
