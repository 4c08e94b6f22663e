#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncc::cli {

/// Exit codes: 0 success, 1 usage error, 2 runtime error.
enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

/// Runs the `ncc` command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncc::cli
