#pragma once

// Command dispatch for the `rnm` executable, separated from main() so the
// commands can be driven in-process.

#include <string>
#include <vector>

namespace rnm::cli {

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kPrecondition = 2,
    kExpression = 3,
    kSchema = 4,
    kConvergence = 5,
};

struct CommandResult {
    int exit_code = kOk;
    /// JSON document, CSV text or help text, newline-terminated.
    std::string payload;
    std::vector<std::string> diagnostics;
};

/// argv excludes the program name. Never throws.
CommandResult run(const std::vector<std::string>& argv);

}  // namespace rnm::cli
