#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace macrocoh::cli {

/// Runs the command line `args` (without the program name). JSON or CSV goes
/// to `out`, diagnostics to `err`. Returns 0 on success, 1 on validation or
/// computation errors and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace macrocoh::cli
