#pragma once

#include <stdexcept>
#include <string>

namespace granulyzer {

// CLI exit codes are a stable contract:
//   0 success, 1 usage/config error, 2 I/O error, 3 internal invariant violation.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_io = 2,
    exit_internal = 3,
};

// Bad user input: malformed config, malformed CSV row, invalid parameter combos.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failures: unreadable input, unwritable output.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested structure exceeds a configured budget (e.g. task-graph edges).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A checked internal invariant failed; always a bug.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace granulyzer
