#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace blockprof {

/// Runs the command line tool. `args` excludes the program name. Returns 0
/// on success, 2 on usage or domain errors and 1 on internal errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blockprof
