#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace halrates {

// Outcome of a single named check. `skipped` marks checks whose prerequisite
// modulus is absent (not a failure); `truncated` marks checks whose witness
// range lay beyond the horizon, so nothing was actually tested.
enum class CheckStatus { pass, fail, skipped, truncated };

const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status;
    std::string detail; // human-readable: witness index, values, or why skipped
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    void add(std::string name, CheckStatus status, std::string detail = {});
    void merge(const VerificationReport& other);

    std::size_t failures() const;
    // True when no check failed. Skipped/truncated entries do not count
    // against this; they are visible in the report for the caller to judge.
    bool all_passed() const { return failures() == 0; }

    nlohmann::json to_json() const;
};

} // namespace halrates
