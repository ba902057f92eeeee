#include "halrates/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halrates/kernels.hpp"

namespace halrates {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string eps_str(const BigRat& eps) {
    return eps.str();
}

} // namespace

CheckResult check_divergence_rate(const std::string& label, const TermFn& terms,
                                  const ModulusFn& theta, std::uint64_t horizon,
                                  const VerifyOptions& opt) {
    if (horizon < 1) throw DomainError("check_divergence_rate: horizon must be >= 1");
    // Collect the indices theta(1), theta(2), ... while they stay inside the
    // horizon. The n <= horizon cap keeps bogus claims (theta constant, say)
    // from looping forever: a genuine rate has theta(n) >= n anyway.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points; // (n, theta(n))
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        BoundIndex t = theta.at_index(BigInt(n));
        if (t.value() > horizon) break;
        std::uint64_t tu = t.as_u64();
        if (tu < n) {
            return {label, CheckStatus::fail,
                    "theta(" + std::to_string(n) + ") = " + std::to_string(tu) +
                        " < n, violating theta(n) >= n"};
        }
        points.emplace_back(n, tu);
    }
    if (points.empty())
        return {label, CheckStatus::truncated, "theta(1) already exceeds the horizon"};

    std::vector<std::uint64_t> checkpoints;
    checkpoints.reserve(points.size());
    for (const auto& [n, t] : points) checkpoints.push_back(t);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    std::vector<double> sums = kernels::prefix_sums(terms, 1, checkpoints);
    auto sum_at = [&](std::uint64_t cp) {
        auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), cp);
        return sums[static_cast<std::size_t>(it - checkpoints.begin())];
    };
    for (const auto& [n, t] : points) {
        double s = sum_at(t);
        double need = static_cast<double>(n);
        if (!(s >= need - opt.tol * (1.0 + need))) {
            return {label, CheckStatus::fail,
                    "sum_{i<=theta(" + std::to_string(n) + ")=" + std::to_string(t) +
                        "} = " + fmt(s) + " < n = " + std::to_string(n)};
        }
    }
    return {label, CheckStatus::pass,
            "checked n = 1.." + std::to_string(points.back().first) +
                " (theta range within horizon)"};
}

CheckResult check_cauchy_modulus(const std::string& label, const TermFn& terms,
                                 const ModulusFn& gamma, const BigRat& eps,
                                 std::uint64_t horizon) {
    if (horizon < 1) throw DomainError("check_cauchy_modulus: horizon must be >= 1");
    BoundIndex g = gamma.at_eps(eps);
    if (g.value() >= horizon)
        return {label, CheckStatus::truncated,
                "gamma(" + eps_str(eps) + ") = " + g.decimal() + " leaves no room below horizon"};
    std::uint64_t gu = g.as_u64();
    const double eps_d = eps.convert_to<double>();
    // Terms are nonnegative, so the largest tail is the full one.
    double tail = kernels::sum_range(terms, gu + 1, horizon);
    if (tail < eps_d)
        return {label, CheckStatus::pass,
                "tail sum over (" + std::to_string(gu) + ", " + std::to_string(horizon) +
                    "] = " + fmt(tail) + " < eps"};
    // Find the first prefix that breaks the bound for the witness.
    kernels::CompensatedSum acc;
    std::uint64_t witness = gu;
    for (std::uint64_t i = gu + 1; i <= horizon; ++i) {
        acc.add(terms(i));
        if (acc.value() >= eps_d) {
            witness = i;
            break;
        }
    }
    return {label, CheckStatus::fail,
            "partial sums reach " + fmt(acc.value()) + " >= eps = " + eps_str(eps) +
                " by index " + std::to_string(witness)};
}

CheckResult check_convergence_rate(const std::string& label, const TermFn& seq,
                                   const ModulusFn& alpha, const BigRat& eps,
                                   std::uint64_t horizon) {
    if (horizon < 1) throw DomainError("check_convergence_rate: horizon must be >= 1");
    BoundIndex a = alpha.at_eps(eps);
    if (a.value() > horizon)
        return {label, CheckStatus::truncated,
                "alpha(" + eps_str(eps) + ") = " + a.decimal() + " exceeds the horizon"};
    std::uint64_t au = a.as_u64();
    const double eps_d = eps.convert_to<double>();
    auto [mx, arg] = kernels::max_range(seq, au, horizon);
    if (mx < eps_d)
        return {label, CheckStatus::pass,
                "max over [" + std::to_string(au) + ", " + std::to_string(horizon) + "] = " +
                    fmt(mx) + " < eps"};
    return {label, CheckStatus::fail,
            "value " + fmt(mx) + " at n = " + std::to_string(arg) + " is not < eps = " +
                eps_str(eps)};
}

VerificationReport verify_moduli(const Schedule& s, std::uint64_t horizon,
                                 const std::vector<BigRat>& eps_grid,
                                 const VerifyOptions& opt) {
    if (horizon < 1) throw DomainError("verify_moduli: horizon must be >= 1");
    if (horizon > (std::uint64_t{1} << 27))
        throw DomainError("verify_moduli: horizon too large to materialize the schedule");
    for (const auto& e : eps_grid)
        if (e <= 0) throw DomainError("verify_moduli: eps grid values must be positive");

    VerificationReport report;

    // Materialize lambda once; every later check reads this array, which keeps
    // arbitrary user rules out of the parallel regions.
    std::vector<double> lam(horizon + 1, 0.0);
    bool values_ok = true;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        try {
            lam[n] = s.lambda_at(n);
        } catch (const ScheduleDomainError& e) {
            report.add("lambda_range", CheckStatus::fail, e.what());
            values_ok = false;
            break;
        }
    }
    if (values_ok)
        report.add("lambda_range", CheckStatus::pass,
                   "lambda_1.." + std::to_string(horizon) + " all in [0,1]");
    if (!values_ok) {
        report.add("decreasing_flag", CheckStatus::skipped, "schedule values invalid");
        report.add("divergence_rate", CheckStatus::skipped, "schedule values invalid");
        for (const auto& e : eps_grid) {
            report.add("cauchy_modulus[eps=" + eps_str(e) + "]", CheckStatus::skipped,
                       "schedule values invalid");
            report.add("convergence_rate[eps=" + eps_str(e) + "]", CheckStatus::skipped,
                       "schedule values invalid");
        }
        return report;
    }

    if (s.decreasing()) {
        std::optional<std::uint64_t> bump;
        if (horizon > 1)
            bump = kernels::first_where(
                [&lam](std::uint64_t n) { return lam[n + 1] > lam[n]; }, 1, horizon - 1);
        if (!bump)
            report.add("decreasing_flag", CheckStatus::pass, "no increase found");
        else
            report.add("decreasing_flag", CheckStatus::fail,
                       "lambda increases at n = " + std::to_string(*bump) + ": " +
                           fmt(lam[*bump]) + " -> " + fmt(lam[*bump + 1]));
    } else {
        report.add("decreasing_flag", CheckStatus::skipped, "schedule not flagged decreasing");
    }

    TermFn lam_term = [&lam](std::uint64_t i) { return lam[i]; };
    if (s.has_theta())
        report.checks.push_back(
            check_divergence_rate("divergence_rate", lam_term, s.theta(), horizon, opt));
    else
        report.add("divergence_rate", CheckStatus::skipped, "no rate of divergence attached");

    TermFn diff_term = [&lam](std::uint64_t i) { return std::abs(lam[i + 1] - lam[i]); };
    for (const auto& e : eps_grid) {
        if (!s.has_beta())
            report.add("cauchy_modulus[eps=" + eps_str(e) + "]", CheckStatus::skipped,
                       "no Cauchy modulus available");
        else if (horizon < 2)
            report.add("cauchy_modulus[eps=" + eps_str(e) + "]", CheckStatus::truncated,
                       "horizon too small for difference terms");
        else
            report.checks.push_back(check_cauchy_modulus("cauchy_modulus[eps=" + eps_str(e) + "]",
                                                         diff_term, s.beta(), e, horizon - 1));
        if (s.has_alpha())
            report.checks.push_back(check_convergence_rate(
                "convergence_rate[eps=" + eps_str(e) + "]", lam_term, s.alpha(), e, horizon));
        else
            report.add("convergence_rate[eps=" + eps_str(e) + "]", CheckStatus::skipped,
                       "no rate of convergence attached");
    }
    return report;
}

} // namespace halrates
