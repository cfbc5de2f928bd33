#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace srrt {

/// Entry point of the `srrt` tool. `args[0]` is the program name. Returns 0
/// on success, 2 on a usage error (usage text on `err`) and 1 on any other
/// failure, which is reported as one JSON line on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srrt
