#include "halrates/report.hpp"

namespace halrates {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
        case CheckStatus::truncated: return "truncated";
    }
    return "?";
}

void VerificationReport::add(std::string name, CheckStatus status, std::string detail) {
    checks.push_back({std::move(name), status, std::move(detail)});
}

void VerificationReport::merge(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::size_t VerificationReport::failures() const {
    std::size_t n = 0;
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) ++n;
    return n;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    }
    return {{"checks", arr}, {"failures", failures()}, {"passed", all_passed()}};
}

} // namespace halrates
