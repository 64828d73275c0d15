#ifndef HT_SELFTEST_HPP
#define HT_SELFTEST_HPP

#include <string>
#include <vector>

namespace ht {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the acceptance criteria; `filter` keeps only criteria whose name
// contains it.  The "runtime" criterion always runs and accounts for the
// wall clock of the executed set.
std::vector<CriterionResult> run_selftest(const std::string& filter = "");

} // namespace ht

#endif // HT_SELFTEST_HPP
