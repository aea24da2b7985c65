#pragma once

#include <string>
#include <vector>

namespace plc::cli {

/// Entry point behind the `plc` binary; args[0] is the program name.
/// Exit codes: 0 success, 1 usage error, 2 data or numeric error.
int run(const std::vector<std::string>& args);

}  // namespace plc::cli
