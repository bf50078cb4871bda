#pragma once

#include <cstdint>
#include <string>
#include <vector>

/// The acceptance criteria as runnable checks with their own oracles. Reports
/// are deterministic: no timings, fixed float formatting.
namespace exlab::verify {

struct Options {
    bool quick = false;
    std::uint64_t seed = 20240917;
    unsigned threads = 0; ///< 0 = hardware concurrency
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion 1..10; throws ValidationError for other ids.
CriterionResult run_criterion(int id, const Options &options);

std::vector<CriterionResult> run_all(const Options &options);

/// One "[PASS]"/"[FAIL]" line per criterion plus indented details.
std::string render(const std::vector<CriterionResult> &results, const Options &options);

} // namespace exlab::verify
