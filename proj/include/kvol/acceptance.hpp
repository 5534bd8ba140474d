#pragma once

#include <string>
#include <vector>

namespace kvol {

class VolumeEngine;

struct CheckLine {
    std::string what;
    double measured = 0; // residual or worst relative error
    double bound = 0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CheckLine> checks;
    double seconds = 0;
    bool pass() const;
    std::string summary() const; // worst failing check, else worst margin
};

// criteria 1..10
CriterionResult run_criterion(int id, VolumeEngine& engine);

// named groups: kernels, chi1, engine, rtr, identities, limits, all
std::vector<int> suite_criteria(const std::string& suite);

} // namespace kvol
