#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace semiquant::cli {

enum ExitCode { kOk = 0, kConfigError = 1, kComputeError = 2 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semiquant::cli
