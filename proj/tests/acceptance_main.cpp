#include "polx/acceptance.hpp"

#include <iostream>

int main() {
    const auto results = polx::run_acceptance(std::cout);
    int passed = 0;
    for (const auto& r : results) passed += r.pass();
    std::cout << passed << "/" << results.size() << " criteria pass\n";
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}
