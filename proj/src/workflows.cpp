#include "halrates/workflows.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "halrates/bounds.hpp"
#include "halrates/errors.hpp"
#include "halrates/iteration.hpp"
#include "halrates/oracle.hpp"
#include "halrates/rng.hpp"
#include "halrates/verify.hpp"
#include "halrates/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace halrates {

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, p);
}

namespace {

json envelope(const ExperimentConfig& cfg, const char* command) {
    return json{{"tool_version", kToolVersion},
                {"command", command},
                {"config_digest", config_digest(cfg.raw_text)},
                {"seed", cfg.seed},
                {"results", json::array()}};
}

json bound_json(const BoundIndex& b) {
    return json{{"value", b.decimal()}, {"log10", b.log10_view()}};
}

std::string eps_label(const ExperimentConfig& cfg, std::size_t i) {
    if (i < cfg.eps_text.size() && !cfg.eps_text[i].empty()) return cfg.eps_text[i];
    return cfg.eps[i].str();
}

void emit_json(WorkflowResult& res, const ExperimentConfig& cfg, const char* name) {
    if (!cfg.want_json) return;
    std::string path = (fs::path(cfg.out_dir) / (std::string(name) + ".json")).string();
    write_file_atomic(path, res.doc.dump(2) + "\n");
    res.written.push_back(path);
}

// The norm constant for bound computations: explicit M wins, then the
// bounded-domain derivation from d_C. Empty when neither is configured.
struct ConfiguredM {
    std::optional<BigInt> value;
    std::string source;
};

ConfiguredM configured_M(const ExperimentConfig& cfg) {
    if (cfg.M) return {*cfg.M, "bounds.M"};
    if (cfg.d_C) return {bounded_domain_M(*cfg.d_C), "bounds.d_C"};
    return {};
}

std::string missing_modulus_desc(const Schedule& s) {
    if (!s.has_theta()) return "theta (rate of divergence)";
    if (!s.has_alpha()) return "alpha (rate of convergence)";
    return "beta (Cauchy modulus; attach one or use a nonincreasing schedule)";
}

// Shared trajectory-run plumbing for simulate and compare.
struct RunSetup {
    Vec anchor;
    RunOptions opts;
};

RunSetup make_run_setup(const ExperimentConfig& cfg, const NonexpansiveOp& op) {
    RunSetup rs;
    rs.anchor = cfg.anchor.value_or(Vec(op.dim(), 0.0));
    rs.opts.scalar_cap = cfg.scalar_cap;
    for (const BigRat& e : cfg.eps) rs.opts.crossing_eps.push_back(e.convert_to<double>());
    return rs;
}

json trajectory_summary(const Trajectory& t) {
    json s;
    s["iteration"] = to_string(t.kind);
    s["operator"] = t.operator_id;
    s["schedule"] = t.schedule_id;
    s["norm"] = to_string(t.norm);
    s["horizon"] = t.horizon;
    s["stored_steps"] = t.stored;
    s["final_residual"] = t.final_residual;
    s["max_residual"] = json{{"value", t.max_residual}, {"at", t.argmax_residual}};
    s["max_norm_x"] = t.max_norm_x;
    return s;
}

json crossing_json(const ExperimentConfig& cfg, const Trajectory& t) {
    json arr = json::array();
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
        const CrossingStat& c = t.crossings[i];
        json e;
        e["eps"] = eps_label(cfg, i);
        e["first_crossing"] = c.first_below ? json(*c.first_below) : json(nullptr);
        e["last_at_or_above"] = c.last_at_or_above ? json(*c.last_at_or_above) : json(nullptr);
        arr.push_back(std::move(e));
    }
    return arr;
}

void require_eps_in_range(const ExperimentConfig& cfg) {
    for (std::size_t i = 0; i < cfg.eps.size(); ++i)
        if (cfg.eps[i] <= 0 || cfg.eps[i] >= 2)
            throw ConfigError("eps value " + eps_label(cfg, i) + " is outside (0, 2)",
                              "run.eps[" + std::to_string(i) + "]");
}

} // namespace

// ---- certify ---------------------------------------------------------------

WorkflowResult cmd_certify(const ExperimentConfig& cfg) {
    if (cfg.eps.empty())
        throw ConfigError("certify needs a non-empty run.eps list", "run.eps");
    const Schedule& s = cfg.schedule;
    ConfiguredM M = configured_M(cfg);

    const bool can_phi = M.value && s.has_alpha() && s.has_beta() && s.has_theta();
    const bool can_psi = M.value && s.decreasing() && s.has_alpha() && s.has_theta();
    const bool can_harmonic = cfg.d_C && s.kind() == ScheduleKind::harmonic;
    const bool can_h = cfg.D && s.has_beta() && s.has_theta();
    if (!can_phi && !can_psi && !can_harmonic && !can_h) {
        if (!M.value)
            throw ConfigError("no certificate is computable: set bounds.M or bounds.d_C",
                              "bounds");
        throw ConfigError("no certificate is computable: schedule '" + s.id() + "' lacks " +
                              missing_modulus_desc(s),
                          "schedule");
    }

    WorkflowResult res;
    res.doc = envelope(cfg, "certify");
    if (M.value) res.doc["M"] = json{{"value", M.value->str()}, {"source", M.source}};

    bool any_error = false;
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
        const BigRat& eps = cfg.eps[i];
        json entry;
        entry["eps"] = eps_label(cfg, i);
        json bounds = json::object();
        json errors = json::object();
        auto attempt = [&](const char* name, bool enabled, auto&& f) {
            if (!enabled) return;
            try {
                bounds[name] = bound_json(f());
            } catch (const Error& e) {
                errors[name] = e.what();
                any_error = true;
            }
        };
        attempt("phi", can_phi,
                [&] { return phi_general(s.alpha(), s.beta(), s.theta(), *M.value, eps); });
        attempt("psi", can_psi, [&] { return psi_decreasing(s, *M.value, eps); });
        attempt("phi_harmonic", can_harmonic, [&] { return phi_harmonic(*cfg.d_C, eps); });
        attempt("h", can_h, [&] { return h_liu(s.beta(), s.theta(), *cfg.D, eps); });
        entry["bounds"] = std::move(bounds);
        if (!errors.empty()) entry["errors"] = std::move(errors);
        res.doc["results"].push_back(std::move(entry));
    }
    res.exit_code = any_error ? 1 : 0;
    emit_json(res, cfg, "certify");
    return res;
}

// ---- simulate --------------------------------------------------------------

WorkflowResult cmd_simulate(const ExperimentConfig& cfg) {
    if (!cfg.op) throw ConfigError("simulate needs an [operator] table", "operator");
    if (!cfg.horizon) throw ConfigError("simulate needs run.horizon", "run.horizon");
    require_eps_in_range(cfg);
    const NonexpansiveOp& op = *cfg.op;
    const Schedule& s = cfg.schedule;
    RunSetup rs = make_run_setup(cfg, op);

    // Trajectory CSV, streamed step by step up to the scalar cap and renamed
    // into place only after the run finishes (or fails: partial rows kept,
    // flagged below).
    std::string csv_path, csv_tmp;
    std::ofstream csv;
    if (cfg.want_csv) {
        csv_path = (fs::path(cfg.out_dir) / "trajectory.csv").string();
        csv_tmp = csv_path + ".tmp";
        fs::create_directories(fs::path(csv_path).parent_path());
        csv.open(csv_tmp, std::ios::binary | std::ios::trunc);
        if (!csv) throw Error("cannot open '" + csv_tmp + "' for writing");
        csv << "n,lambda_n,residual,step_gap,norm_x\n";
        const std::uint64_t cap = cfg.scalar_cap;
        rs.opts.sink = [&csv, cap](const StepView& v) {
            if (v.n >= cap) return;
            char row[192];
            std::snprintf(row, sizeof row, "%llu,%.17g,%.17g,%.17g,%.17g\n",
                          static_cast<unsigned long long>(v.n), v.lambda, v.residual, v.step_gap,
                          v.norm_x);
            csv << row;
        };
    }
    auto finish_csv = [&](WorkflowResult& r) {
        if (!cfg.want_csv) return;
        csv.flush();
        if (!csv) throw Error("failed writing '" + csv_tmp + "'");
        csv.close();
        fs::rename(csv_tmp, csv_path);
        r.written.push_back(csv_path);
    };

    WorkflowResult res;
    res.doc = envelope(cfg, "simulate");
    Trajectory t;
    try {
        t = cfg.iteration == IterationKind::halpern
                ? halpern_run(op, rs.anchor, s, *cfg.horizon, rs.opts)
                : km_run(op, rs.anchor, s, *cfg.horizon, rs.opts);
    } catch (const NumericBlowupError& e) {
        json record;
        record["status"] = "blowup";
        record["error"] = e.what();
        if (cfg.want_csv) record["trajectory_csv"] = json{{"path", "trajectory.csv"}, {"partial", true}};
        res.doc["results"].push_back(std::move(record));
        res.exit_code = 2;
        finish_csv(res);
        emit_json(res, cfg, "simulate");
        return res;
    }
    finish_csv(res);

    json summary = trajectory_summary(t);
    summary["status"] = "completed";
    MEstimate me = estimate_M(t);
    summary["M_estimate"] = json{{"value", me.value.str()}, {"certified", me.certified}};
    summary["crossings"] = crossing_json(cfg, t);
    if (cfg.want_csv) summary["trajectory_csv"] = json{{"path", "trajectory.csv"}, {"partial", false}};

    if (t.kind == IterationKind::halpern) {
        BigInt M_chk = configured_M(cfg).value.value_or(me.value);
        VerificationReport rep = check_halpern_inequalities(op, t, s, M_chk);
        summary["inequalities"] = json{{"M", M_chk.str()}, {"checks", rep.to_json()}};
        if (!rep.all_passed()) res.exit_code = 2;
    }
    res.doc["results"].push_back(std::move(summary));
    emit_json(res, cfg, "simulate");
    return res;
}

// ---- compare ---------------------------------------------------------------

WorkflowResult cmd_compare(const ExperimentConfig& cfg) {
    if (!cfg.op) throw ConfigError("compare needs an [operator] table", "operator");
    if (!cfg.horizon) throw ConfigError("compare needs run.horizon", "run.horizon");
    if (cfg.eps.empty())
        throw ConfigError("compare needs a non-empty run.eps list", "run.eps");
    if (cfg.iteration != IterationKind::halpern)
        throw ConfigError("compare certifies the Halpern iteration only", "run.iteration");
    require_eps_in_range(cfg);
    const Schedule& s = cfg.schedule;
    const bool can_psi = s.decreasing() && s.has_alpha() && s.has_theta();
    const bool can_phi = s.has_alpha() && s.has_beta() && s.has_theta();
    if (!can_psi && !can_phi)
        throw ConfigError("no bound is computable: schedule '" + s.id() + "' lacks " +
                              missing_modulus_desc(s),
                          "schedule");

    const NonexpansiveOp& op = *cfg.op;
    RunSetup rs = make_run_setup(cfg, op);
    Trajectory t = halpern_run(op, rs.anchor, s, *cfg.horizon, rs.opts);

    ConfiguredM cm = configured_M(cfg);
    BigInt M;
    std::string m_source;
    bool m_certified = true;
    if (cm.value) {
        M = *cm.value;
        m_source = cm.source;
    } else {
        MEstimate me = estimate_M(t);
        M = me.value;
        m_certified = me.certified;
        m_source = me.certified ? "invariant_ball" : "empirical";
    }

    WorkflowResult res;
    res.doc = envelope(cfg, "compare");
    res.doc["M"] = json{{"value", M.str()}, {"source", m_source}, {"certified", m_certified}};
    res.doc["trajectory"] = trajectory_summary(t);

    bool any_error = false, any_violation = false;
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
        const BigRat& eps = cfg.eps[i];
        const CrossingStat& cr = t.crossings[i];
        json entry;
        entry["eps"] = eps_label(cfg, i);
        entry["first_crossing"] = cr.first_below ? json(*cr.first_below) : json(nullptr);
        entry["last_at_or_above"] =
            cr.last_at_or_above ? json(*cr.last_at_or_above) : json(nullptr);
        try {
            BoundIndex bound = can_psi ? psi_decreasing(s, M, eps)
                                       : phi_general(s.alpha(), s.beta(), s.theta(), M, eps);
            entry["bound"] = bound_json(bound);
            entry["bound"]["name"] = can_psi ? "psi" : "phi";
            if (bound.value() > BigInt(t.horizon)) {
                entry["verdict"] = "UNTESTABLE";
            } else if (!cr.last_at_or_above || BigInt(*cr.last_at_or_above) < bound.value()) {
                entry["verdict"] = "SOUND";
            } else {
                entry["verdict"] = "VIOLATION";
                entry["witness"] = *cr.last_at_or_above;
                any_violation = true;
            }
        } catch (const Error& e) {
            entry["error"] = e.what();
            any_error = true;
        }
        res.doc["results"].push_back(std::move(entry));
    }

    VerificationReport rep = check_halpern_inequalities(op, t, s, M);
    res.doc["inequalities"] = json{{"M", M.str()}, {"checks", rep.to_json()}};

    if (any_violation || !rep.all_passed())
        res.exit_code = 2;
    else if (any_error)
        res.exit_code = 1;
    emit_json(res, cfg, "compare");
    return res;
}

// ---- verify ----------------------------------------------------------------

namespace {

json report_suite(const char* suite, const VerificationReport& rep, json extra = {}) {
    json entry = std::move(extra);
    entry["suite"] = suite;
    entry["checks"] = rep.to_json();
    entry["failures"] = rep.failures();
    return entry;
}

// Spot-check the multiplicative tail bound of the recurrence on a simulated
// prefix: the fixed pair (1,4) plus a few seeded random (n, m).
json sample_product_bounds(const RecurrenceInstance& inst, std::uint64_t seed,
                           std::uint64_t horizon, std::size_t& failures) {
    json arr = json::array();
    const std::uint64_t cap = std::min<std::uint64_t>(horizon, 4096);
    if (cap < 6) return arr;
    std::vector<double> a = simulate_recurrence(inst, cap);
    SmallRng rng = SmallRng::for_stream(seed, 0x50B0ull);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs = {{1, 4}};
    for (int k = 0; k < 3; ++k) {
        std::uint64_t n = 1 + rng.next_u64() % (cap - 2);
        std::uint64_t m = 1 + rng.next_u64() % (cap - n);
        pairs.emplace_back(n, m);
    }
    for (auto [n, m] : pairs) {
        ProductBoundResult pb = check_product_bound(inst, a, n, m, 1e-9);
        if (!pb.pass) ++failures;
        arr.push_back(json{{"n", n}, {"m", m}, {"pass", pb.pass}, {"lhs", pb.lhs}, {"rhs", pb.rhs}});
    }
    return arr;
}

} // namespace

WorkflowResult cmd_verify(const ExperimentConfig& cfg) {
    std::vector<BigRat> grid = cfg.verify_eps;
    if (grid.empty()) grid = {BigRat(1, 10), BigRat(1, 100), BigRat(1, 1000)};

    WorkflowResult res;
    res.doc = envelope(cfg, "verify");
    std::size_t failures = 0;

    // 1. The configured schedule's moduli against their definitions.
    {
        VerificationReport rep = verify_moduli(cfg.schedule, cfg.verify_horizon, grid);
        failures += rep.failures();
        res.doc["results"].push_back(
            report_suite("schedule_moduli", rep, json{{"schedule", cfg.schedule.id()}}));
    }

    // 2. The configured operator, if any.
    if (cfg.op) {
        VerificationReport rep = check_nonexpansive(*cfg.op, cfg.verify_trials, cfg.seed);
        failures += rep.failures();
        res.doc["results"].push_back(
            report_suite("operator", rep, json{{"operator", cfg.op->id()}}));
    }

    // 3. Recurrence oracle sweep: the hand-checked instance, then seeded
    // random instances; each gets certificate checks over the oracle eps
    // grid plus sampled product bounds.
    const std::vector<BigRat> oracle_grid = {BigRat(1), BigRat(1, 2), BigRat(1, 10),
                                             BigRat(1, 100)};
    auto run_instance = [&](const RecurrenceInstance& inst, std::uint64_t seed) {
        VerificationReport rep = check_h_bound(inst, oracle_grid, cfg.verify_horizon);
        failures += rep.failures();
        json extra;
        extra["instance"] = inst.id;
        extra["D"] = inst.D.str();
        extra["product_bounds"] = sample_product_bounds(inst, seed, cfg.verify_horizon, failures);
        res.doc["results"].push_back(report_suite("recurrence_oracle", rep, std::move(extra)));
    };
    run_instance(
        RecurrenceInstance::make(Schedule::constant(BigRat(1, 2)),
                                 b_geometric(BigRat(1), BigRat(1, 2)), 1.0),
        cfg.seed);
    for (std::uint64_t i = 0; i < cfg.oracle_seeds; ++i)
        run_instance(random_instance(cfg.seed + i), cfg.seed + i);

    res.doc["failures"] = failures;
    res.exit_code = failures ? 2 : 0;
    emit_json(res, cfg, "verify");
    return res;
}

} // namespace halrates
