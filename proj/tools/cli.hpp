#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tfrotor::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on a runtime failure or a failed check, 2 on a usage or validation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tfrotor::cli
