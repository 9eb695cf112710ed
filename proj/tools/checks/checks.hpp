#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nilheat::checks {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
    bool gating = true;  // informational lines do not affect the verdict
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks{};
    double seconds = 0.0;

    bool passed() const;
    void expect(std::string check, bool pass, std::string detail = {});
    void note(std::string check, std::string detail);
};

// Each suite maps to one acceptance criterion.
SuiteResult group_suite();           // 1
SuiteResult representation_suite();  // 2
SuiteResult propagator_suite();      // 3
SuiteResult engel_kernel_suite();    // 4
SuiteResult cartan_kernel_suite();   // 5
SuiteResult cross_validation_suite();  // 6
SuiteResult determinism_suite();     // 7

// Runs a suite, turning an escaping exception into a failed check and recording wall time.
SuiteResult run_suite(const std::string& name, const std::function<SuiteResult()>& suite);

}  // namespace nilheat::checks
