#include <fmt/format.h>

#include <cstdio>
#include <functional>
#include <vector>

#include "checks.hpp"

using namespace nilheat::checks;

// One line per criterion, followed by the failing or informational checks behind it.
int main() {
    const std::vector<std::pair<const char*, std::function<SuiteResult()>>> criteria = {
        {"group", group_suite},           {"rep", representation_suite},     {"propagator", propagator_suite},
        {"kernel-g4", engel_kernel_suite}, {"kernel-g5", cartan_kernel_suite}, {"mc", cross_validation_suite},
        {"determinism", determinism_suite},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const SuiteResult r = run_suite(criteria[i].first, criteria[i].second);
        int passed = 0, gating = 0;
        for (const CheckResult& c : r.checks)
            if (c.gating) {
                ++gating;
                passed += c.pass;
            }
        fmt::print("criterion {}: {} ({}, {}/{} checks, {:.1f} s)\n", i + 1, r.passed() ? "PASS" : "FAIL", r.name, passed,
                   gating, r.seconds);
        for (const CheckResult& c : r.checks)
            if (!c.gating || !c.pass) fmt::print("    {} {}: {}\n", c.gating ? "failed" : "info", c.name, c.detail);
        std::fflush(stdout);
        failed += !r.passed();
    }
    return failed == 0 ? 0 : 1;
}
