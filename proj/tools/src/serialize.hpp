// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "derw/model.hpp"
#include "derw/normalizers.hpp"
#include "derw/simulate.hpp"
#include "derw/stats.hpp"

namespace derw_lab {

/// paths.csv: one row per (path, checkpoint), M_hat repeated per row.
std::string paths_csv(const derw::Ensemble& ens);

std::string normalizers_csv(const derw::Normalizers& norm,
                            const std::vector<std::int64_t>& rows);
nlohmann::json normalizers_summary_json(const derw::Normalizers& norm);

nlohmann::json regime_json(const derw::RegimeReport& regime);
std::string regime_summary_line(const derw::RegimeReport& regime);

std::string clt_csv(const derw::CltReport& report);
nlohmann::json clt_json(const derw::CltReport& report, const Thresholds& thresholds);

std::string lil_csv(const derw::LilReport& report, double eps_out, double eps_in);
nlohmann::json lil_json(const derw::LilReport& report, double eps_out, double eps_in);

std::string mconv_csv(const derw::MConvergenceReport& report);
nlohmann::json mconv_json(const derw::MConvergenceReport& report);

std::string lemmas_csv(const derw::Lemma1Report& lemma1, const derw::SummabilityReport& summ,
                       const derw::VarianceFloorReport& floor);
nlohmann::json lemmas_json(const derw::Lemma1Report& lemma1, const derw::SummabilityReport& summ,
                           const derw::VarianceFloorReport& floor);

struct PhaseScanRow {
    double p = 0.0;
    double alpha = 0.0;
    derw::RegimeReport regime;
};
std::string phase_scan_csv(const std::vector<PhaseScanRow>& rows);

}  // namespace derw_lab
