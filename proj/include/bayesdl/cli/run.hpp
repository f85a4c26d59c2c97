#pragma once

namespace bayesdl::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

/// Parses argv, runs the chosen subcommand and maps failures to exit codes:
/// 1 usage, 2 data or configuration, 3 divergence or ill-conditioning.
int run(int argc, const char* const* argv);

}  // namespace bayesdl::cli
