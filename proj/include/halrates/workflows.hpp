#pragma once

// The four experiment workflows behind the CLI subcommands. Each consumes a
// parsed ExperimentConfig, writes its report files under cfg.out_dir
// (atomically: tmp + rename), and returns the report document plus the
// process exit code:
//   0  everything passed / SOUND / UNTESTABLE
//   1  validation problem (bad or insufficient config), thrown as ConfigError
//   2  a check failed, a verdict is VIOLATION, or a run blew up
// Given identical config text and seed, outputs are byte-identical.

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "halrates/config.hpp"

namespace halrates {

struct WorkflowResult {
    nlohmann::json doc; // full report, same content as the written JSON
    int exit_code = 0;
    std::vector<std::string> written; // files produced, in write order
};

// Certified bounds (phi, psi, harmonic phi, h) for each eps in run.eps,
// exact decimal + log10 each. Per-eps computation errors become error
// entries; the remaining entries are still produced.
WorkflowResult cmd_certify(const ExperimentConfig& cfg);

// Run the configured iteration, stream the trajectory CSV, and summarize:
// first crossing per eps, norm-constant estimate, inequality checks.
WorkflowResult cmd_simulate(const ExperimentConfig& cfg);

// Certified bound vs simulated residuals, per eps: SOUND, UNTESTABLE
// (bound beyond the horizon), or VIOLATION with a witness index.
WorkflowResult cmd_compare(const ExperimentConfig& cfg);

// Property suites: schedule moduli definitions, operator nonexpansiveness,
// and the recurrence oracle sweep (hand-checked instance + seeded random
// instances, certificate and product-bound checks).
WorkflowResult cmd_verify(const ExperimentConfig& cfg);

// Write content to path via a sibling .tmp file and an atomic rename,
// creating parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace halrates
