#pragma once

#include <ostream>

namespace stcalc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomainFailure = 2, kNonConvergent = 3 };

/// Parses argv, dispatches the subcommand and writes JSON or CSV to `out`.
/// Failures are written to `err` as JSON carrying the library error name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stcalc::cli
