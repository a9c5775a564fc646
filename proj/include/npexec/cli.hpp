#pragma once

#include <string>
#include <vector>

namespace npexec::cli {

// Runs one command. `args` excludes the program name. Exit codes: 0 success
// or schedulable, 2 usage error, 3 unschedulable, 4 unsupported input.
int run(std::vector<std::string> args);

}  // namespace npexec::cli
