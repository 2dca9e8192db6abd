#include "hole_energy/acceptance.hpp"

#include <cstdio>

int main() {
    int failed = 0;
    const auto results = hole::acceptance::run_all({}, [&](const hole::acceptance::CriterionResult& r) {
        std::printf("[%s] %s (%.2f s): %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.seconds, r.detail.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
    });
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
