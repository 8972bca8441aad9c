// validate.hpp - cross-oracle self test run by `nmcorr validate`

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nmcorr::cli {

struct CheckResult {
    std::string name;
    bool pass{false};
    std::string detail;
    double seconds{0.0};
};

/// Runs the suite, printing one line per check as it completes.  `quick`
/// keeps the cheap subset.
std::vector<CheckResult> run_validation(bool quick, std::ostream& out);

}  // namespace nmcorr::cli
