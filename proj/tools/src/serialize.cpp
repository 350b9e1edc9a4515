// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "serialize.hpp"

#include <cmath>

#include "csv.hpp"

namespace derw_lab {

using nlohmann::json;

std::string paths_csv(const derw::Ensemble& ens) {
    CsvBuilder csv("path_index,checkpoint,S,M_hat");
    for (std::int64_t p = 0; p < ens.n_paths; ++p) {
        for (std::size_t ci = 0; ci < ens.checkpoints.size(); ++ci) {
            csv.field(p)
                .field(ens.checkpoints[ci])
                .field(ens.s_at(p, ci))
                .field(ens.m_hat[static_cast<std::size_t>(p)]);
            csv.end_row();
        }
    }
    return csv.text();
}

std::string normalizers_csv(const derw::Normalizers& norm, const std::vector<std::int64_t>& rows) {
    CsvBuilder csv("n,a_n,EX,ES,A2,B2");
    for (std::int64_t n : rows) {
        if (n < 1 || n > norm.n_max) continue;
        const auto i = static_cast<std::size_t>(n);
        csv.field(n).field(norm.a[i]).field(norm.EX[i]).field(norm.ES[i]).field(norm.A2[i]).field(
            norm.B2[i]);
        csv.end_row();
    }
    return csv.text();
}

json normalizers_summary_json(const derw::Normalizers& norm) {
    json j;
    j["n_max"] = norm.n_max;
    j["A2_n_max"] = norm.A2[static_cast<std::size_t>(norm.n_max)];
    j["B2_n_max"] = norm.B2[static_cast<std::size_t>(norm.n_max)];
    j["sum_inv_a4"] = norm.sum_inv_a4;
    if (norm.a_inf) {
        j["a_inf2"] = norm.a_inf->value;
        j["a_inf2_half_width"] = norm.a_inf->half_width;
        j["a_inf2_n_used"] = norm.a_inf->n_used;
        j["tail_bound_from_n_max"] = norm.a_inf2_tail_bound();
    } else {
        j["a_inf2"] = nullptr;
    }
    return j;
}

json regime_json(const derw::RegimeReport& regime) {
    json j;
    j["diffusivity"] = derw::to_string(regime.diffusivity);
    j["elephant_strength"] = derw::to_string(regime.elephant_strength);
    j["b_inf_finite"] = derw::to_string(regime.b_inf_finite);
    j["thm1_applicable"] = derw::to_string(regime.thm1_applicable);
    j["thm3_applicable"] = derw::to_string(regime.thm3_applicable);
    j["variance_floor_expected"] = regime.variance_floor_expected;
    j["alpha_limits"] = {regime.alpha_limits.liminf, regime.alpha_limits.limsup};
    j["beta_limits"] = {regime.beta_limits.liminf, regime.beta_limits.limsup};
    return j;
}

std::string regime_summary_line(const derw::RegimeReport& regime) {
    std::string out = derw::to_string(regime.diffusivity);
    switch (regime.elephant_strength) {
        case derw::ElephantStrength::weak: out += ", weak elephant"; break;
        case derw::ElephantStrength::strong: out += ", strong elephant"; break;
        case derw::ElephantStrength::indeterminate: out += ", elephant strength indeterminate"; break;
    }
    if (regime.thm3_applicable != derw::TheoremApplicability::no) {
        out += std::string(", Theorem 3(") +
               (regime.thm3_applicable == derw::TheoremApplicability::cond_I ? "I" : "II") + ")";
    } else if (regime.thm1_applicable != derw::TheoremApplicability::no) {
        out += std::string(", Theorem 1(") +
               (regime.thm1_applicable == derw::TheoremApplicability::cond_I ? "I" : "II") + ")";
    } else {
        out += ", no theorem applies";
    }
    return out;
}

std::string clt_csv(const derw::CltReport& report) {
    CsvBuilder csv("n,samples,mean,var,skew,ex_kurt,ks_stat,ks_p");
    for (const auto& row : report.rows) {
        csv.field(row.n)
            .field(row.samples)
            .field(row.mean)
            .field(row.variance)
            .field(row.skewness)
            .field(row.excess_kurtosis)
            .field(row.ks_statistic)
            .field(row.ks_p_value);
        csv.end_row();
    }
    return csv.text();
}

json clt_json(const derw::CltReport& report, const Thresholds& thresholds) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        const bool pass = row.ks_p_value > thresholds.ks_p_min &&
                          std::abs(row.mean) < thresholds.mean_abs_max &&
                          row.variance >= thresholds.var_lo && row.variance <= thresholds.var_hi &&
                          std::abs(row.skewness) < thresholds.skew_abs_max &&
                          std::abs(row.excess_kurtosis) < thresholds.ex_kurt_abs_max;
        rows.push_back({{"n", row.n},
                        {"samples", row.samples},
                        {"mean", row.mean},
                        {"var", row.variance},
                        {"skew", row.skewness},
                        {"ex_kurt", row.excess_kurtosis},
                        {"ks_stat", row.ks_statistic},
                        {"ks_p", row.ks_p_value},
                        {"passes_thresholds", pass}});
    }
    return {{"scale_kind", derw::to_string(report.scale_kind)},
            {"rows", rows},
            {"skipped_checkpoints", report.skipped_checkpoints},
            {"thresholds",
             {{"ks_p_min", thresholds.ks_p_min},
              {"mean_abs_max", thresholds.mean_abs_max},
              {"var_lo", thresholds.var_lo},
              {"var_hi", thresholds.var_hi},
              {"skew_abs_max", thresholds.skew_abs_max},
              {"ex_kurt_abs_max", thresholds.ex_kurt_abs_max}}}};
}

std::string lil_csv(const derw::LilReport& report, double eps_out, double eps_in) {
    CsvBuilder csv("kind,sign,param,value");
    for (std::size_t i = 0; i < report.quantile_levels.size(); ++i) {
        csv.field(std::string("quantile")).field(std::string("+")).field(report.quantile_levels[i]);
        csv.field(report.quantiles_plus[i]);
        csv.end_row();
        csv.field(std::string("quantile")).field(std::string("-")).field(report.quantile_levels[i]);
        csv.field(report.quantiles_minus[i]);
        csv.end_row();
    }
    csv.field(std::string("frac_above")).field(std::string("+")).field(1.0 + eps_out);
    csv.field(report.frac_above_plus);
    csv.end_row();
    csv.field(std::string("frac_above")).field(std::string("-")).field(1.0 + eps_out);
    csv.field(report.frac_above_minus);
    csv.end_row();
    csv.field(std::string("frac_at_least")).field(std::string("+")).field(1.0 - eps_in);
    csv.field(report.frac_at_least_plus);
    csv.end_row();
    csv.field(std::string("frac_at_least")).field(std::string("-")).field(1.0 - eps_in);
    csv.field(report.frac_at_least_minus);
    csv.end_row();
    return csv.text();
}

json lil_json(const derw::LilReport& report, double eps_out, double eps_in) {
    json j;
    j["window"] = {report.n_lo, report.n_hi};
    j["used_checkpoints"] = report.used_checkpoints;
    json excluded = json::array();
    for (std::size_t i = 0; i < report.excluded_checkpoints.size(); ++i)
        excluded.push_back(
            {{"n", report.excluded_checkpoints[i]}, {"reason", report.exclusion_reasons[i]}});
    j["excluded_checkpoints"] = excluded;
    j["quantile_levels"] = report.quantile_levels;
    j["quantiles_plus"] = report.quantiles_plus;
    j["quantiles_minus"] = report.quantiles_minus;
    j["eps_out"] = eps_out;
    j["eps_in"] = eps_in;
    j["frac_above_plus"] = report.frac_above_plus;
    j["frac_above_minus"] = report.frac_above_minus;
    j["frac_at_least_plus"] = report.frac_at_least_plus;
    j["frac_at_least_minus"] = report.frac_at_least_minus;
    return j;
}

std::string mconv_csv(const derw::MConvergenceReport& report) {
    CsvBuilder csv("n,n2,mean_sq_diff,std_err");
    for (const auto& pair : report.pairs) {
        csv.field(pair.n).field(pair.n2).field(pair.mean_sq_diff).field(pair.std_err);
        csv.end_row();
    }
    return csv.text();
}

json mconv_json(const derw::MConvergenceReport& report) {
    json pairs = json::array();
    for (const auto& pair : report.pairs)
        pairs.push_back({{"n", pair.n},
                         {"n2", pair.n2},
                         {"mean_sq_diff", pair.mean_sq_diff},
                         {"std_err", pair.std_err}});
    return {{"pairs", pairs},
            {"m_hat_mean", report.m_hat_mean},
            {"m_hat_mean_se", report.m_hat_mean_se},
            {"m_hat_var", report.m_hat_var},
            {"m_hat_var_se", report.m_hat_var_se},
            {"degenerate", report.degenerate}};
}

namespace {

double summability_sum_at(const derw::SummabilityReport& summ, std::int64_t n) {
    for (const auto& row : summ.rows)
        if (row.n == n) return row.sum_lemma2;
    return std::nan("");
}

double floor_at(const derw::VarianceFloorReport& floor, std::int64_t n) {
    for (const auto& row : floor.rows)
        if (row.n == n) return row.exact_var;
    return std::nan("");
}

}  // namespace

std::string lemmas_csv(const derw::Lemma1Report& lemma1, const derw::SummabilityReport& summ,
                       const derw::VarianceFloorReport& floor) {
    CsvBuilder csv("n,ratio_lemma1,partial_sum_lemma2,var_floor");
    for (const auto& row : lemma1.rows) {
        csv.field(row.n)
            .field(row.ratio)
            .field(summability_sum_at(summ, row.n))
            .field(floor_at(floor, row.n));
        csv.end_row();
    }
    return csv.text();
}

json lemmas_json(const derw::Lemma1Report& lemma1, const derw::SummabilityReport& summ,
                 const derw::VarianceFloorReport& floor) {
    json l1 = json::array();
    for (const auto& row : lemma1.rows)
        l1.push_back(
            {{"n", row.n}, {"s2_next", row.s2_next}, {"tail", row.tail}, {"ratio", row.ratio}});
    json sm = json::array();
    for (const auto& row : summ.rows)
        sm.push_back({{"n", row.n},
                      {"sum_inv_a2", row.sum_inv_a2},
                      {"ratio_inv_a2", row.ratio_inv_a2},
                      {"sum_inv_a4", row.sum_inv_a4},
                      {"ratio_inv_a4", row.ratio_inv_a4},
                      {"sum_lemma2", row.sum_lemma2},
                      {"ratio_lemma2", row.ratio_lemma2}});
    json vf = json::array();
    for (const auto& row : floor.rows)
        vf.push_back({{"n", row.n},
                      {"exact_var", row.exact_var},
                      {"ensemble_var", std::isnan(row.ensemble_var)
                                           ? json(nullptr)
                                           : json(row.ensemble_var)}});
    return {{"lemma1", {{"used_a_inf", lemma1.used_a_inf}, {"rows", l1}}},
            {"summability", sm},
            {"variance_floor", {{"floor", floor.floor}, {"rows", vf}}}};
}

std::string phase_scan_csv(const std::vector<PhaseScanRow>& rows) {
    CsvBuilder csv("p,alpha,diffusivity,elephant_strength,b_inf_finite,thm1,thm3");
    for (const auto& row : rows) {
        csv.field(row.p)
            .field(row.alpha)
            .field(std::string(derw::to_string(row.regime.diffusivity)))
            .field(std::string(derw::to_string(row.regime.elephant_strength)))
            .field(std::string(derw::to_string(row.regime.b_inf_finite)))
            .field(std::string(derw::to_string(row.regime.thm1_applicable)))
            .field(std::string(derw::to_string(row.regime.thm3_applicable)));
        csv.end_row();
    }
    return csv.text();
}

}  // namespace derw_lab
