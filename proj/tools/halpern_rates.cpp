// Command-line front end: certify / simulate / compare / verify, each driven
// by a declarative TOML config. Exit codes: 0 all pass (or SOUND/UNTESTABLE),
// 1 validation problem, 2 failed check or VIOLATION.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "halrates/config.hpp"
#include "halrates/errors.hpp"
#include "halrates/version.hpp"
#include "halrates/workflows.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool print = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config (TOML)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_dir, "output directory (overrides [output].directory)");
    sub->add_option("--seed", args.seed, "seed override (overrides [run].seed)");
    sub->add_flag("--print", args.print, "also dump the JSON report to stdout");
}

int run(const CommonArgs& args,
        halrates::WorkflowResult (*workflow)(const halrates::ExperimentConfig&)) {
    halrates::ExperimentConfig cfg = halrates::load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed) cfg.seed = *args.seed;
    halrates::WorkflowResult res = workflow(cfg);
    for (const std::string& path : res.written) std::printf("wrote %s\n", path.c_str());
    if (args.print || res.written.empty()) std::printf("%s\n", res.doc.dump(2).c_str());
    const char* outcome = res.exit_code == 0   ? "ok"
                          : res.exit_code == 1 ? "validation error"
                                               : "check failure";
    std::printf("%s: %s (exit %d)\n", res.doc["command"].get<std::string>().c_str(), outcome,
                res.exit_code);
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Halpern iteration runner with certified asymptotic-regularity rates"};
    app.set_version_flag("--version", halrates::kToolVersion);
    app.require_subcommand(1);

    CommonArgs certify_args, simulate_args, compare_args, verify_args;
    CLI::App* certify =
        app.add_subcommand("certify", "compute certified bounds (phi/psi/harmonic phi/h)");
    add_common(certify, certify_args);
    CLI::App* simulate =
        app.add_subcommand("simulate", "run the iteration, export trajectory CSV + summary");
    add_common(simulate, simulate_args);
    CLI::App* compare =
        app.add_subcommand("compare", "certified bound vs simulated residuals, per eps");
    add_common(compare, compare_args);
    CLI::App* verify =
        app.add_subcommand("verify", "property suites: moduli, operator, recurrence oracle");
    add_common(verify, verify_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) return run(certify_args, halrates::cmd_certify);
        if (simulate->parsed()) return run(simulate_args, halrates::cmd_simulate);
        if (compare->parsed()) return run(compare_args, halrates::cmd_compare);
        return run(verify_args, halrates::cmd_verify);
    } catch (const halrates::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
