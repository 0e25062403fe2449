#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unisup::cli {

// Runs one CLI invocation. args[0] is the program name. Returns the process
// exit code: 0 success, 1 usage error, 2 data validation failure, 3 I/O
// failure. Machine-readable results go to `out`, progress and errors to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace unisup::cli
