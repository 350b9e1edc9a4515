// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "derw/model.hpp"
#include "derw/simulate.hpp"
#include "derw/stats.hpp"

namespace derw_lab {

/// A config file failed to parse or validate; the message carries the
/// offending field path (and line number for the key/value format).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointSpec {
    enum class Kind { explicit_list, dyadic, log_spaced };
    Kind kind = Kind::dyadic;
    std::vector<std::int64_t> values;  // explicit_list
    std::int64_t count = 0;            // log_spaced
};

struct GridSpec {
    double from = 0.0;
    double to = 1.0;
    std::int64_t count = 2;
};

struct Thresholds {
    double ks_p_min = 1e-3;
    double mean_abs_max = 0.05;
    double var_lo = 0.9;
    double var_hi = 1.1;
    double skew_abs_max = 0.1;
    double ex_kurt_abs_max = 0.2;
};

enum class AInfMode { auto_detect, always, never };

struct ExperimentConfig {
    derw::ModelParams model;

    // run
    std::int64_t n_max = 1000;
    CheckpointSpec checkpoints;
    std::int64_t n_paths = 1;
    std::uint64_t master_seed = 1;
    derw::SimBackend backend = derw::SimBackend::state_only;
    int worker_count = 0;  // 0: resolve from DERW_LAB_THREADS, then 1
    std::int64_t separation_factor = 100;

    // analysis
    std::optional<derw::ScaleKind> scale_kind;
    std::optional<std::pair<std::int64_t, std::int64_t>> lil_window;
    std::int64_t lil_points = 40;
    double eps_out = 0.5;
    double eps_in = 0.5;
    double rel_tol = 1e-3;
    double abs_tol = 1e-6;
    std::int64_t a_inf_budget = 100'000'000;
    double loglog_floor = 0.5;
    AInfMode a_inf_mode = AInfMode::auto_detect;
    std::int64_t sum_depth = 0;  // lemmas: summability depth, 0 = n_max
    Thresholds thresholds;

    // phase-scan grids
    std::optional<GridSpec> scan_p;
    std::optional<GridSpec> scan_alpha;

    // output
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;
};

/// Loads either encoding: native JSON (first non-space byte '{') or the
/// dotted key/value text format. A run manifest is accepted too; its
/// embedded config is extracted. Unknown keys are errors.
ExperimentConfig load_config_file(const std::string& path);

/// Parses the dotted key/value text into the JSON schema form.
nlohmann::json kv_to_json(const std::string& text);

/// Validates the JSON form and builds the config (strict schema).
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Canonical JSON form of a config: parsing it again yields the same
/// config; used for the manifest embedding and the config hash.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Deterministic expansion of the checkpoint generators:
///   explicit  — the given list (validated sorted unique in [0, n_max]);
///   dyadic    — powers of two up to n_max;
///   log-spaced(k) — k geometrically spaced integers in
///                   [10, n_max / separation_factor], deduplicated.
std::vector<std::int64_t> expand_checkpoints(const CheckpointSpec& spec, std::int64_t n_max,
                                             std::int64_t separation_factor);

/// Geometric integer grid helper used by the lil/lemmas commands.
std::vector<std::int64_t> log_spaced_grid(std::int64_t lo, std::int64_t hi, std::int64_t count);

}  // namespace derw_lab
