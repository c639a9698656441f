#pragma once

#include <string>
#include <vector>

namespace eqa {

// `eqa generate|run|report ...`; returns the process exit code
// (0 success, 2 usage error, 1 runtime error).
int run_command(const std::vector<std::string>& args);

}  // namespace eqa
