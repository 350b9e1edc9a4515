// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "derw/errors.hpp"
#include "manifest.hpp"
#include "serialize.hpp"

namespace derw_lab {

using nlohmann::json;

namespace {

constexpr int kExitNotApplicable = 2;

derw::AInfOptions a_inf_options(const ExperimentConfig& config) {
    return {config.rel_tol, config.abs_tol, config.a_inf_budget};
}

/// Attaches the A_inf^2 estimate when the regime admits one (or the config
/// insists). Returns false when mode == always but the tail is not summable.
/// In auto mode a blown iteration budget degrades to a warning; commands
/// that cannot work without the estimate request it directly instead.
bool maybe_attach_a_inf(derw::Normalizers& norm, const ExperimentConfig& config,
                        const derw::RegimeReport& regime) {
    if (config.a_inf_mode == AInfMode::never) return true;
    const bool finite = regime.b_inf_finite == derw::Finiteness::finite;
    if (config.a_inf_mode == AInfMode::auto_detect && !finite) return true;
    try {
        norm.a_inf = derw::estimate_A_inf(config.model, a_inf_options(config));
    } catch (const derw::NotSummable&) {
        if (config.a_inf_mode == AInfMode::always) return false;
    } catch (const derw::BudgetExceeded& e) {
        if (config.a_inf_mode == AInfMode::always) throw;
        std::fprintf(stderr, "note: A_inf^2 estimate skipped: %s (raise analysis.rel_tol or "
                             "analysis.a_inf_budget)\n", e.what());
    }
    return true;
}

int resolved_workers(const ExperimentConfig& config) {
    if (config.worker_count > 0) return config.worker_count;
    if (const char* env = std::getenv("DERW_LAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

std::vector<std::int64_t> run_checkpoints(const ExperimentConfig& config) {
    auto cps = expand_checkpoints(config.checkpoints, config.n_max, config.separation_factor);
    if (cps.empty()) throw ConfigError("config.run.checkpoints: expansion produced no checkpoints");
    return cps;
}

derw::Ensemble run_configured_ensemble(const ExperimentConfig& config,
                                       const derw::Normalizers& norm,
                                       const std::vector<std::int64_t>& cps) {
    const int workers = resolved_workers(config);
    std::fprintf(stderr, "simulating %lld paths to n = %lld on %d worker(s)\n",
                 static_cast<long long>(config.n_paths), static_cast<long long>(config.n_max),
                 workers);
    return derw::run_ensemble(config.model, norm, config.n_max, cps, config.n_paths,
                              config.master_seed, config.backend, workers);
}

json maybe_summary(const derw::Normalizers& norm) {
    return norm.a_inf ? normalizers_summary_json(norm) : json(nullptr);
}

bool thm3_gate(const derw::RegimeReport& regime) {
    return regime.b_inf_finite == derw::Finiteness::finite;
}

}  // namespace

int cmd_regime(const ExperimentConfig& config) {
    const auto regime = derw::classify_regime(config.model);
    std::printf("%s\n", regime_summary_line(regime).c_str());
    std::printf("  diffusivity:        %s\n", derw::to_string(regime.diffusivity));
    std::printf("  elephant strength:  %s\n", derw::to_string(regime.elephant_strength));
    std::printf("  B_inf^2:            %s\n", derw::to_string(regime.b_inf_finite));
    std::printf("  Theorem 1:          %s\n", derw::to_string(regime.thm1_applicable));
    std::printf("  Theorem 3:          %s\n", derw::to_string(regime.thm3_applicable));
    std::printf("  variance floor:     %s\n", regime.variance_floor_expected ? "expected" : "not expected");

    std::vector<OutputFile> files;
    if (config.write_json) {
        json j = regime_json(regime);
        j["summary"] = regime_summary_line(regime);
        files.push_back({"regime.json", j.dump(2) + "\n"});
    }
    write_outputs("regime", config, regime, nullptr, files);
    return 0;
}

int cmd_normalizers(const ExperimentConfig& config) {
    const auto regime = derw::classify_regime(config.model);
    auto norm = derw::compute_normalizers(config.model, config.n_max);
    if (!maybe_attach_a_inf(norm, config, regime)) {
        std::fprintf(stderr,
                     "A_inf^2 requested but the tail is not summable: p <= 3/4 or "
                     "lsup(alpha) < 1/(4p-2) gives B_inf^2 = inf (Lemma 10)\n");
        return kExitNotApplicable;
    }

    // Row policy: every n for small tables, else a geometric grid (explicit
    // checkpoints are always included).
    std::vector<std::int64_t> rows;
    if (config.n_max <= 10000) {
        for (std::int64_t n = 1; n <= config.n_max; ++n) rows.push_back(n);
    } else {
        rows = log_spaced_grid(1, config.n_max, 1000);
    }
    if (config.checkpoints.kind == CheckpointSpec::Kind::explicit_list) {
        rows.insert(rows.end(), config.checkpoints.values.begin(), config.checkpoints.values.end());
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    }

    std::vector<OutputFile> files;
    if (config.write_csv) files.push_back({"normalizers.csv", normalizers_csv(norm, rows)});
    if (config.write_json)
        files.push_back({"normalizers_summary.json", normalizers_summary_json(norm).dump(2) + "\n"});
    write_outputs("normalizers", config, regime, maybe_summary(norm), files);
    return 0;
}

int cmd_simulate(const ExperimentConfig& config) {
    const auto regime = derw::classify_regime(config.model);
    const auto norm = derw::compute_normalizers(config.model, config.n_max);
    const auto cps = run_checkpoints(config);
    const auto ens = run_configured_ensemble(config, norm, cps);

    std::vector<OutputFile> files;
    files.push_back({"paths.csv", paths_csv(ens)});
    write_outputs("simulate", config, regime, nullptr, files);
    return 0;
}

int cmd_clt(const ExperimentConfig& config) {
    if (!config.scale_kind)
        throw ConfigError("config.analysis.scale_kind: required for the clt command");
    const auto kind = *config.scale_kind;
    const auto regime = derw::classify_regime(config.model);
    if (kind != derw::ScaleKind::thm1_weak && !thm3_gate(regime)) {
        std::fprintf(stderr,
                     "scale_kind %s needs the strong-elephant regime: Lemma 10 gives "
                     "B_inf^2 = inf here, so the drift M does not exist\n",
                     derw::to_string(kind));
        return kExitNotApplicable;
    }
    if (kind == derw::ScaleKind::thm1_weak &&
        regime.thm1_applicable == derw::TheoremApplicability::no) {
        std::fprintf(stderr,
                     "note: Theorem 1 is not formally applicable here (%s); "
                     "reporting the a_n A_n normalization anyway\n",
                     regime_summary_line(regime).c_str());
    }

    const auto norm = derw::compute_normalizers(config.model, config.n_max);
    const auto cps = run_checkpoints(config);
    const auto ens = run_configured_ensemble(config, norm, cps);
    const auto report = derw::clt_report(ens, norm, kind, {config.separation_factor});
    if (report.rows.empty())
        std::fprintf(stderr,
                     "note: no usable checkpoint (the separation factor %lld keeps drift-"
                     "subtracting scales at n <= n_max/separation)\n",
                     static_cast<long long>(config.separation_factor));

    std::vector<OutputFile> files;
    if (config.write_csv) files.push_back({"clt.csv", clt_csv(report)});
    if (config.write_json)
        files.push_back({"clt.json", clt_json(report, config.thresholds).dump(2) + "\n"});
    write_outputs("clt", config, regime, nullptr, files);
    return 0;
}

int cmd_lil(const ExperimentConfig& config) {
    if (!config.lil_window)
        throw ConfigError("config.analysis.lil_window: required for the lil command");
    const auto [n_lo, n_hi] = *config.lil_window;
    if (n_hi > config.n_max)
        throw ConfigError("config.analysis.lil_window: n_hi exceeds run.n_max");
    const auto regime = derw::classify_regime(config.model);
    if (!thm3_gate(regime)) {
        std::fprintf(stderr,
                     "the LIL envelope needs the strong-elephant regime: Lemma 10 gives "
                     "B_inf^2 = inf here\n");
        return kExitNotApplicable;
    }

    auto norm = derw::compute_normalizers(config.model, config.n_max);
    norm.a_inf = derw::estimate_A_inf(config.model, a_inf_options(config));

    // Checkpoint grid: geometric points over the window plus any explicit
    // run checkpoints falling inside it.
    auto cps = log_spaced_grid(n_lo, n_hi, config.lil_points);
    if (config.checkpoints.kind == CheckpointSpec::Kind::explicit_list) {
        for (std::int64_t c : config.checkpoints.values)
            if (c >= n_lo && c <= n_hi) cps.push_back(c);
        std::sort(cps.begin(), cps.end());
        cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    }
    const auto ens = run_configured_ensemble(config, norm, cps);

    derw::LilOptions opts;
    opts.eps_out = config.eps_out;
    opts.eps_in = config.eps_in;
    opts.envelope.loglog_floor = config.loglog_floor;
    const auto report = derw::lil_report(ens, norm, n_lo, n_hi, opts);
    for (std::size_t i = 0; i < report.excluded_checkpoints.size(); ++i)
        std::fprintf(stderr, "excluded checkpoint %lld: %s\n",
                     static_cast<long long>(report.excluded_checkpoints[i]),
                     report.exclusion_reasons[i].c_str());

    std::vector<OutputFile> files;
    if (config.write_csv)
        files.push_back({"lil.csv", lil_csv(report, config.eps_out, config.eps_in)});
    if (config.write_json)
        files.push_back({"lil.json", lil_json(report, config.eps_out, config.eps_in).dump(2) + "\n"});
    write_outputs("lil", config, regime, maybe_summary(norm), files);
    return 0;
}

int cmd_mconv(const ExperimentConfig& config) {
    const auto regime = derw::classify_regime(config.model);
    if (!thm3_gate(regime)) {
        std::fprintf(stderr,
                     "M convergence needs B_inf^2 < inf (Lemma 10); this configuration "
                     "is outside that regime\n");
        return kExitNotApplicable;
    }
    const auto norm = derw::compute_normalizers(config.model, config.n_max);
    // Dyadic checkpoints give the (n, 2n) pairs.
    const auto cps = expand_checkpoints({CheckpointSpec::Kind::dyadic, {}, 0}, config.n_max,
                                        config.separation_factor);
    const auto ens = run_configured_ensemble(config, norm, cps);
    const auto report = derw::m_convergence_report(ens, norm);
    if (report.degenerate) std::fprintf(stderr, "note: degenerate ensemble (Var(M_hat) = 0)\n");

    std::vector<OutputFile> files;
    if (config.write_csv) files.push_back({"mconv.csv", mconv_csv(report)});
    if (config.write_json) files.push_back({"mconv.json", mconv_json(report).dump(2) + "\n"});
    write_outputs("mconv", config, regime, nullptr, files);
    return 0;
}

int cmd_lemmas(const ExperimentConfig& config) {
    const auto regime = derw::classify_regime(config.model);
    const std::int64_t depth = std::max(config.sum_depth, config.n_max);
    auto norm = derw::compute_normalizers(config.model, depth);
    if (!maybe_attach_a_inf(norm, config, regime)) return kExitNotApplicable;

    const auto cps = run_checkpoints(config);
    const auto ens = run_configured_ensemble(config, norm, cps);
    const auto lemma1 = derw::lemma1_ratio_report(config.model, ens, norm);

    std::vector<std::int64_t> grid = log_spaced_grid(1, depth, 60);
    for (const auto& row : lemma1.rows) grid.push_back(row.n);
    grid.push_back(depth);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto summ = derw::summability_report(config.model, norm, lemma1, grid);
    const auto floor = derw::variance_floor_report(norm, cps, &ens);

    std::vector<OutputFile> files;
    if (config.write_csv) files.push_back({"lemmas.csv", lemmas_csv(lemma1, summ, floor)});
    if (config.write_json)
        files.push_back({"lemmas.json", lemmas_json(lemma1, summ, floor).dump(2) + "\n"});
    write_outputs("lemmas", config, regime, maybe_summary(norm), files);
    return 0;
}

int cmd_phase_scan(const ExperimentConfig& config) {
    if (!config.scan_p || !config.scan_alpha)
        throw ConfigError("config.scan: phase-scan needs scan.p and scan.alpha grids");
    std::vector<PhaseScanRow> rows;
    for (std::int64_t i = 0; i < config.scan_p->count; ++i) {
        const double p =
            config.scan_p->from + (config.scan_p->to - config.scan_p->from) *
                                      static_cast<double>(i) /
                                      static_cast<double>(config.scan_p->count - 1);
        for (std::int64_t j = 0; j < config.scan_alpha->count; ++j) {
            const double alpha =
                config.scan_alpha->from + (config.scan_alpha->to - config.scan_alpha->from) *
                                              static_cast<double>(j) /
                                              static_cast<double>(config.scan_alpha->count - 1);
            derw::ModelParams params = config.model;
            params.p = p;
            params.alpha = derw::ConstantSeq{alpha};
            rows.push_back({p, alpha, derw::classify_regime(params)});
        }
    }
    const auto regime = derw::classify_regime(config.model);
    std::vector<OutputFile> files;
    files.push_back({"phase_scan.csv", phase_scan_csv(rows)});
    write_outputs("phase-scan", config, regime, nullptr, files);
    return 0;
}

}  // namespace derw_lab
