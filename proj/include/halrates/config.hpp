#pragma once

// Declarative experiment configs. The on-disk format is a TOML subset
// (tables, dotted sub-tables, scalars, arrays, arrays-of-arrays, comments) —
// see README for the schema. Numbers keep their raw text so that eps-like
// quantities can be interpreted as exact decimal rationals rather than
// doubles.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halrates/big_nat.hpp"
#include "halrates/iteration.hpp"
#include "halrates/operators.hpp"
#include "halrates/schedule.hpp"

namespace halrates {

struct TomlValue {
    enum class Kind { string, number, boolean, array };
    Kind kind = Kind::string;
    std::string text; // string contents, or the raw numeric token
    double num = 0.0;
    bool flag = false;
    std::vector<TomlValue> items;
    long line = -1;
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    std::map<std::string, TomlTable> subs;
    long line = -1;

    const TomlValue* find(const std::string& key) const;
    const TomlTable* sub(const std::string& name) const;
};

// Throws ConfigError carrying a line number on malformed input.
TomlTable parse_toml(const std::string& text);

struct ExperimentConfig {
    std::string raw_text; // exact file contents, digested into reports

    Schedule schedule = Schedule::harmonic();
    std::optional<NonexpansiveOp> op;

    IterationKind iteration = IterationKind::halpern;
    std::optional<Vec> anchor;
    std::optional<std::uint64_t> horizon;
    std::vector<BigRat> eps;           // exact values
    std::vector<std::string> eps_text; // as written in the config
    std::uint64_t seed = 0;
    std::uint64_t scalar_cap = 1'000'000;

    std::optional<BigInt> M;
    std::optional<BigRat> d_C;
    std::optional<BigInt> D;

    std::uint64_t verify_horizon = 100'000;
    std::uint64_t verify_trials = 1'000;
    std::uint64_t oracle_seeds = 100;
    std::vector<BigRat> verify_eps; // empty -> workflow default grid

    std::string out_dir = "out";
    bool want_json = true;
    bool want_csv = true;
};

ExperimentConfig config_from_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// FNV-1a 64-bit over the raw config text, rendered as 16 hex digits.
std::string config_digest(const std::string& raw_text);

} // namespace halrates
