#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jacobi::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jacobi::cli
