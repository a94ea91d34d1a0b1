#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dcm {

/// Runs the command line (args[0] is the program name). Returns the exit
/// code; errors are reported on `err` as "error[<Code>]: message".
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dcm
