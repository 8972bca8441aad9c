// cli.hpp - the nmcorr command line, callable in-process

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nmcorr::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kNumerical = 3 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmcorr::cli
