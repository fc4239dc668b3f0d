#pragma once

#include <string>
#include <vector>

namespace metaplectic::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Run every end-to-end verification check (seeded, deterministic).
std::vector<CheckResult> run_all_checks();

/// Names of the available checks, in execution order.
std::vector<std::string> check_names();

/// Run one check by name; throws InvalidInputError for unknown names.
CheckResult run_check(const std::string& name);

}  // namespace metaplectic::verify
