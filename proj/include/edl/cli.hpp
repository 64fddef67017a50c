#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edl::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 2,
    kConfig = 3,
    kNumerical = 4,
};

/// Runs one CLI invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edl::cli
