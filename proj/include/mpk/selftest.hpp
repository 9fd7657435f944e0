#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpk::selftest {

struct CriterionResult {
    std::string name;
    bool pass = false;
    double runtime_sec = 0.0;
    double budget_sec = 0.0;
    std::vector<std::string> details;
};

std::vector<std::string> criterion_names();
CriterionResult run_criterion(const std::string& name, uint64_t seed);
std::vector<CriterionResult> run_all(uint64_t seed);

}  // namespace mpk::selftest
