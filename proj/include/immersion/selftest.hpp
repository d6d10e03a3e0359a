#pragma once

// Randomized invariant suites behind `selftest`: each suite hammers one
// module contract and reports case/violation counts.

#include <cstdint>
#include <string>
#include <vector>

namespace immersion {

struct SuiteResult {
    std::string name;
    long long cases = 0;
    long long violations = 0;
    std::string note;
};

// level: "quick" (about a tenth of the case counts) or "full".
std::vector<SuiteResult> run_selftest(const std::string& level, std::uint64_t seed);

bool all_clean(const std::vector<SuiteResult>& results);

}  // namespace immersion
