#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace homsys {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::vector<std::string> details;  // one line per sub-check
    double seconds = 0;
    double budget_seconds = 0;
};

struct AcceptanceOptions {
    int threads = 1;
    std::filesystem::path out_dir;  // CSVs of criteria 6 and 9; a temp dir when empty
};

inline constexpr int kCriteria = 9;

/// Throws DomainError for ids outside 1..9.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// "PASS 3 ipp identity (1.2 s / 10 s)" followed by indented detail lines.
std::string format(const CriterionResult& r);

}  // namespace homsys
