#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace numvol::cli {

/// Runs one invocation. `args` excludes the program name. Returns the process exit code:
/// 0 success, 1 a verification check failed, 2 bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace numvol::cli
