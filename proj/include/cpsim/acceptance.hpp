#pragma once

#include <string>
#include <vector>

namespace cpsim::acceptance {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs acceptance criteria (1..10; empty selection = all) and returns one
// result per criterion. Each criterion pins its tolerances internally.
std::vector<CriterionResult> run_acceptance(std::vector<int> selection = {},
                                            int threads = 1);

// Formats the pass/fail table.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace cpsim::acceptance
