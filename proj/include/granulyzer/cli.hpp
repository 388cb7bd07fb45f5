#pragma once

#include <string>
#include <vector>

namespace granulyzer {

// Parses argv-style arguments (without the program name), dispatches the
// subcommand and maps exceptions to the stable exit codes. Runs fully
// in-process so tests can invoke it directly.
int run_cli(const std::vector<std::string>& args);

} // namespace granulyzer
