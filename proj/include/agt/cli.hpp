#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace agt::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { kOk = 0, kCertificateFailure = 1, kUsageError = 2 };

/// Runs `agt <args...>` (args excludes the program name) writing structured
/// output to `out` and diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agt::cli
