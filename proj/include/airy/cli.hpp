#pragma once

#include <string>
#include <vector>

namespace airy {

// Entry point of the `solve` tool. Returns the process exit code:
// 0 success, 1 solve/config failure, 2 usage error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

} // namespace airy
