#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qgs::verify {

/// Outcome of one verification criterion: the worst defect observed, the
/// bound it must stay under, and a human-readable detail line.
struct CriterionResult {
    std::string name;
    bool pass = false;
    double max_defect = 0.0;
    double bound = 0.0;
    double seconds = 0.0;
    std::string detail;
};

CriterionResult unitarity_suite(std::uint64_t seed);
CriterionResult composition_suite(std::uint64_t seed);
CriterionResult example_regression_suite();
CriterionResult star_algebra_suite(std::uint64_t seed);
CriterionResult transfer_suite(std::uint64_t seed);
CriterionResult symmetry_suite(std::uint64_t seed);
CriterionResult eigenvalue_suite();
CriterionResult lemma_suite(std::uint64_t seed);
CriterionResult tadpole_suite(std::uint64_t seed);

/// Runs a named group: "star" (star algebra + lemma properties), "compose"
/// (composition oracle, example regressions, eigenvalue accounting, tadpole
/// invariance), "transfer", or "all".
std::vector<CriterionResult> run_suite(const std::string& which, std::uint64_t seed);

std::string format_result(const CriterionResult& r);

} // namespace qgs::verify
