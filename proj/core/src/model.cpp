// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "derw/model.hpp"

#include <cmath>

#include "derw/errors.hpp"

namespace derw {

void validate_params(const ModelParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0)) throw InvalidParameter("p must lie in [0,1]");
    if (!(params.q >= 0.0 && params.q <= 1.0)) throw InvalidParameter("q must lie in [0,1]");
    validate_sequence(params.alpha);
    validate_sequence(params.beta);
}

double epsilon_of_beta(const ModelParams& params, std::int64_t n) {
    return 2.0 * sequence_value(params.beta, n) - 1.0;
}

RegimeReport classify_regime(const ModelParams& params) {
    RegimeReport report;
    const double p = params.p;
    report.alpha_limits = sequence_limits(params.alpha);
    report.beta_limits = sequence_limits(params.beta);
    const auto [ainf, asup] = report.alpha_limits;
    const auto [binf, bsup] = report.beta_limits;

    report.diffusivity = p < 0.75   ? Diffusivity::diffusive
                         : p > 0.75 ? Diffusivity::superdiffusive
                                    : Diffusivity::critical;

    // The strength threshold 1/(4p-2) is only meaningful past p = 3/4.
    if (p > 0.75) {
        const double threshold = 1.0 / (4.0 * p - 2.0);
        if (asup < threshold) {
            report.elephant_strength = ElephantStrength::weak;
        } else if (ainf > threshold) {
            report.elephant_strength = ElephantStrength::strong;
        } else {
            report.elephant_strength = ElephantStrength::indeterminate;
        }
        // Lemma-10 dichotomy; ties stay unknown.
        if (asup < threshold) {
            report.b_inf_finite = Finiteness::infinite;
        } else if (ainf > threshold) {
            report.b_inf_finite = Finiteness::finite;
        } else {
            report.b_inf_finite = Finiteness::unknown;
        }
    } else {
        report.elephant_strength = ElephantStrength::indeterminate;
        report.b_inf_finite = Finiteness::infinite;
    }

    // beta-threshold (1-lsup(a))/(1-linf(a)) needs lsup(a) < 1; check that
    // first so the denominator is positive.
    const auto beta_window_ok = [&]() {
        if (!(asup < 1.0)) return false;
        const double bthr = (1.0 - asup) / (1.0 - ainf);
        return binf > 0.0 && bsup < bthr;
    };

    if (p > 0.75 && p < 1.0) {
        const double threshold = 1.0 / (4.0 * p - 2.0);
        if (ainf > 0.0 && asup < threshold) report.thm1_applicable = TheoremApplicability::cond_I;
        if (ainf > threshold) report.thm3_applicable = TheoremApplicability::cond_I;
    } else if (p == 1.0) {
        if (ainf > 0.0 && asup < 1.0 && beta_window_ok())
            report.thm1_applicable = TheoremApplicability::cond_II;
        if (ainf > 0.5 && asup < 1.0 && beta_window_ok())
            report.thm3_applicable = TheoremApplicability::cond_II;
    }

    // Lemma 12: any of its three conditions keeps Var[X_n] away from 0.
    const bool lem12_1 = p < 1.0 && ainf > 0.0;
    const bool lem12_2 = p == 1.0 && ainf > 0.0 && asup < 1.0 && beta_window_ok();
    const bool lem12_3 =
        ainf == 0.0 && asup < 1.0 && binf > 0.0 && bsup < 1.0 - p * asup;
    report.variance_floor_expected = lem12_1 || lem12_2 || lem12_3;

    return report;
}

const char* to_string(Diffusivity v) {
    switch (v) {
        case Diffusivity::diffusive: return "diffusive";
        case Diffusivity::critical: return "critical";
        case Diffusivity::superdiffusive: return "superdiffusive";
    }
    return "?";
}

const char* to_string(ElephantStrength v) {
    switch (v) {
        case ElephantStrength::weak: return "weak";
        case ElephantStrength::strong: return "strong";
        case ElephantStrength::indeterminate: return "indeterminate";
    }
    return "?";
}

const char* to_string(Finiteness v) {
    switch (v) {
        case Finiteness::finite: return "finite";
        case Finiteness::infinite: return "infinite";
        case Finiteness::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(TheoremApplicability v) {
    switch (v) {
        case TheoremApplicability::cond_I: return "cond_I";
        case TheoremApplicability::cond_II: return "cond_II";
        case TheoremApplicability::no: return "no";
    }
    return "?";
}

}  // namespace derw
