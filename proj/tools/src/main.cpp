// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "derw/errors.hpp"
#include "version.hpp"

namespace {

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
};

void apply_overrides(derw_lab::ExperimentConfig& config, const CliOverrides& cli) {
    if (cli.seed) config.master_seed = *cli.seed;
    if (cli.workers) config.worker_count = *cli.workers;
    if (cli.out_dir) config.out_dir = *cli.out_dir;
    if (cli.format) {
        config.write_csv = *cli.format == "csv";
        config.write_json = *cli.format == "json";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic elephant random walk laboratory"};
    app.set_version_flag("--version", std::string(derw_lab::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides cli;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (key/value or JSON; a run "
                                                 "manifest is accepted too)")
            ->required();
        sub->add_option("--seed", cli.seed, "override run.master_seed");
        sub->add_option("--workers", cli.workers, "override run.worker_count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out-dir", cli.out_dir, "override output.directory");
        sub->add_option("--format", cli.format, "restrict report files to one encoding")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    using Command = std::function<int(const derw_lab::ExperimentConfig&)>;
    struct Entry {
        CLI::App* sub;
        Command run;
    };
    std::vector<Entry> entries;
    const auto add = [&](const char* name, const char* desc, Command fn) {
        CLI::App* sub = app.add_subcommand(name, desc);
        add_common(sub);
        entries.push_back({sub, std::move(fn)});
    };

    add("regime", "classify the parameter regime and theorem applicability", derw_lab::cmd_regime);
    add("normalizers", "exact a_n, E[X_n], E[S_n], A_n^2, B_n^2 tables", derw_lab::cmd_normalizers);
    add("simulate", "run a seeded ensemble and dump checkpointed paths", derw_lab::cmd_simulate);
    add("clt", "normalized-fluctuation statistics and normality tests", derw_lab::cmd_clt);
    add("lil", "iterated-logarithm envelope ratio statistics", derw_lab::cmd_lil);
    add("mconv", "L2 convergence diagnostics of the drift martingale", derw_lab::cmd_mconv);
    add("lemmas", "tail-ratio, summability and variance-floor witnesses", derw_lab::cmd_lemmas);
    add("phase-scan", "regime classification over a (p, alpha) grid", derw_lab::cmd_phase_scan);

    CLI11_PARSE(app, argc, argv);

    try {
        derw_lab::ExperimentConfig config = derw_lab::load_config_file(config_path);
        apply_overrides(config, cli);
        for (const auto& entry : entries)
            if (entry.sub->parsed()) return entry.run(config);
        return 1;
    } catch (const derw_lab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const derw::InvalidParameter& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const derw::NotSummable& e) {
        std::fprintf(stderr, "not applicable: %s\n", e.what());
        return 2;
    } catch (const derw::Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
