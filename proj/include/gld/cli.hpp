#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gld::cli {

enum ExitCode { kOk = 0, kConflicts = 1, kUsage = 2 };

// full command line including the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gld::cli
