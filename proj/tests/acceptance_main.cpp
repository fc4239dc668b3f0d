// End-to-end acceptance runner: one pass/fail line per criterion.
#include <cstdio>

#include "metaplectic/verify.hpp"

int main() {
    const auto results = metaplectic::verify::run_all_checks();
    bool all_passed = true;
    for (const auto& r : results) {
        std::printf("[%s] %-22s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
        all_passed = all_passed && r.passed;
    }
    std::printf("%s\n", all_passed ? "acceptance: all criteria passed"
                                   : "acceptance: FAILURES present");
    return all_passed ? 0 : 1;
}
