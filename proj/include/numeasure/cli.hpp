#pragma once

#include <string>
#include <vector>

namespace numeasure {

// Command-line entry point (exposed for in-process testing).
// Exit codes: 0 success, 2 input error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

} // namespace numeasure
