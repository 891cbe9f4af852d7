#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bodycomp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kPipeline = 3 };

// Runs one command line (args[0] is the program name). Data files go to disk,
// diagnostics to `err`, help text to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bodycomp::cli
