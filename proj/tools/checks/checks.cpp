#include "checks.hpp"

#include <chrono>
#include <exception>

namespace nilheat::checks {

bool SuiteResult::passed() const {
    for (const CheckResult& c : checks)
        if (c.gating && !c.pass) return false;
    return true;
}

void SuiteResult::expect(std::string check, bool pass, std::string detail) {
    checks.push_back({std::move(check), pass, std::move(detail), true});
}

void SuiteResult::note(std::string check, std::string detail) {
    checks.push_back({std::move(check), true, std::move(detail), false});
}

SuiteResult run_suite(const std::string& name, const std::function<SuiteResult()>& suite) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r{name};
    try {
        r = suite();
    } catch (const std::exception& e) {
        r.expect("suite completed", false, std::string("exception: ") + e.what());
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace nilheat::checks
