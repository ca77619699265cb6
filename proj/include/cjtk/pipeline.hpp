#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cjtk::cli {

// Runs `cjtk [--extension FILE]... <input|-> stage [options] [stage ...]`.
// `args` excludes the program name. Returns the process exit code:
// 0 success, 1 validation warnings, 2 errors, 3 usage problems.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace cjtk::cli
