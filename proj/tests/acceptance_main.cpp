#include <cstdio>
#include <iostream>

#include "cpsim/acceptance.hpp"

int main() {
    auto results = cpsim::acceptance::run_acceptance();
    std::cout << cpsim::acceptance::format_results(results);
    int failures = 0;
    for (const auto& r : results) failures += r.pass ? 0 : 1;
    if (failures) std::cout << failures << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
