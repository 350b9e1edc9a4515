// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "derw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "derw/compensated.hpp"
#include "derw/errors.hpp"

namespace derw {

namespace {

std::size_t idx(std::int64_t n) { return static_cast<std::size_t>(n); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quantile_type7(std::vector<double> sorted, double level) {
    if (sorted.empty()) return kNaN;
    const double h = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double normal_cdf(double x) {
    const double tail = 0.5 * std::erfc(std::abs(x) * 0.7071067811865475244);
    return x <= 0.0 ? tail : 1.0 - tail;
}

double kolmogorov_q(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        // Jacobi-theta form of the CDF; three terms reach ~1e-10 here.
        const double v = M_PI * M_PI / (8.0 * lambda * lambda);
        const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                           (std::exp(-v) + std::exp(-9.0 * v) + std::exp(-25.0 * v) +
                            std::exp(-49.0 * v));
        return std::min(1.0, std::max(0.0, 1.0 - cdf));
    }
    double q = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::exp(-2.0 * static_cast<double>(j) * j * lambda * lambda);
        q += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, q));
}

KsResult ks_test_normal(std::span<const double> samples) {
    if (samples.size() < 50) throw TooFewSamples("ks_test_normal needs >= 50 samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i]);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return {d, kolmogorov_q(std::sqrt(n) * d)};
}

KsResult two_sample_ks(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 50 || b.size() < 50)
        throw TooFewSamples("two_sample_ks needs >= 50 samples on each side");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == v) ++i;
        while (j < sb.size() && sb[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_q(std::sqrt(ne) * d)};
}

SampleMoments sample_moments(std::span<const double> samples) {
    SampleMoments m;
    m.count = static_cast<std::int64_t>(samples.size());
    if (samples.empty()) return m;
    CompensatedSum sum;
    for (double x : samples) sum += x;
    const double n = static_cast<double>(samples.size());
    m.mean = sum.value() / n;
    CompensatedSum m2;
    CompensatedSum m3;
    CompensatedSum m4;
    for (double x : samples) {
        const double d = x - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double mu2 = m2.value() / n;
    m.variance = samples.size() > 1 ? m2.value() / (n - 1.0) : 0.0;
    if (mu2 > 0.0) {
        m.skewness = m3.value() / n / std::pow(mu2, 1.5);
        m.excess_kurtosis = m4.value() / n / (mu2 * mu2) - 3.0;
    }
    return m;
}

const char* to_string(ScaleKind k) {
    switch (k) {
        case ScaleKind::thm3_strong: return "thm3_strong";
        case ScaleKind::thm1_weak: return "thm1_weak";
        case ScaleKind::kubota_takei_root_n: return "kubota_takei_root_n";
    }
    return "?";
}

CltReport clt_report(const Ensemble& ens, const Normalizers& norm, ScaleKind kind,
                     const CltOptions& opts) {
    CltReport report;
    report.scale_kind = kind;
    const bool subtracts_drift = kind != ScaleKind::thm1_weak;
    const double ey2_horizon = norm.ey2_prefix[idx(ens.n_max)];

    bool saw_degenerate = false;
    for (std::size_t ci = 0; ci < ens.checkpoints.size(); ++ci) {
        const std::int64_t n = ens.checkpoints[ci];
        if (n < 1) continue;
        if (subtracts_drift && n * opts.separation_factor > ens.n_max) {
            report.skipped_checkpoints.push_back(n);
            continue;
        }
        double scale = 0.0;
        switch (kind) {
            case ScaleKind::thm1_weak: {
                const double a2 = norm.A2[idx(n)];
                if (a2 <= 0.0) {
                    saw_degenerate = true;
                    report.skipped_checkpoints.push_back(n);
                    continue;
                }
                scale = norm.a[idx(n)] * std::sqrt(a2);
                break;
            }
            case ScaleKind::kubota_takei_root_n:
                scale = std::sqrt(static_cast<double>(n));
                break;
            case ScaleKind::thm3_strong: {
                // Exact variance of M_n - M_hat accrued between n and the
                // estimate's horizon; equals the printed A_inf^2 - A_n^2
                // scale in the limit (Lemma-1 behavior).
                const double t = ey2_horizon - norm.ey2_prefix[idx(n)];
                if (t <= 0.0) {
                    saw_degenerate = true;
                    report.skipped_checkpoints.push_back(n);
                    continue;
                }
                scale = norm.a[idx(n)] * std::sqrt(t);
                break;
            }
        }

        std::vector<double> z(idx(ens.n_paths));
        const double es = norm.ES[idx(n)];
        const double an = norm.a[idx(n)];
        for (std::int64_t pth = 0; pth < ens.n_paths; ++pth) {
            const double centered = static_cast<double>(ens.s_at(pth, ci)) - es -
                                    (subtracts_drift ? an * ens.m_hat[idx(pth)] : 0.0);
            z[idx(pth)] = centered / scale;
        }

        const SampleMoments mom = sample_moments(z);
        CltRow row;
        row.n = n;
        row.samples = mom.count;
        row.mean = mom.mean;
        row.variance = mom.variance;
        row.skewness = mom.skewness;
        row.excess_kurtosis = mom.excess_kurtosis;
        if (z.size() >= 50) {
            const KsResult ks = ks_test_normal(z);
            row.ks_statistic = ks.statistic;
            row.ks_p_value = ks.p_value;
        } else {
            row.ks_statistic = kNaN;
            row.ks_p_value = kNaN;
        }
        report.rows.push_back(row);
    }

    if (report.rows.empty() && saw_degenerate)
        throw ScaleDegenerate("every checkpoint has a degenerate CLT scale");
    return report;
}

LilReport lil_report(const Ensemble& ens, const Normalizers& norm, std::int64_t n_lo,
                     std::int64_t n_hi, const LilOptions& opts) {
    LilReport report;
    report.n_lo = n_lo;
    report.n_hi = n_hi;

    std::vector<std::size_t> used_indices;
    std::vector<double> envelopes;
    for (std::size_t ci = 0; ci < ens.checkpoints.size(); ++ci) {
        const std::int64_t n = ens.checkpoints[ci];
        if (n < n_lo || n > n_hi || n < 1) continue;
        try {
            envelopes.push_back(lil_envelope(n, norm, opts.envelope));
            used_indices.push_back(ci);
            report.used_checkpoints.push_back(n);
        } catch (const EnvelopeUndefined& e) {
            report.excluded_checkpoints.push_back(n);
            report.exclusion_reasons.emplace_back(e.what());
        } catch (const ScaleDegenerate& e) {
            report.excluded_checkpoints.push_back(n);
            report.exclusion_reasons.emplace_back(e.what());
        }
    }
    if (used_indices.empty())
        throw WindowEmpty("no checkpoint in the LIL window has a defined envelope");

    report.sup_plus.resize(idx(ens.n_paths));
    report.sup_minus.resize(idx(ens.n_paths));
    for (std::int64_t pth = 0; pth < ens.n_paths; ++pth) {
        double sp = -std::numeric_limits<double>::infinity();
        double sm = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < used_indices.size(); ++k) {
            const std::size_t ci = used_indices[k];
            const std::int64_t n = ens.checkpoints[ci];
            const double r = (static_cast<double>(ens.s_at(pth, ci)) - norm.ES[idx(n)] -
                              norm.a[idx(n)] * ens.m_hat[idx(pth)]) /
                             envelopes[k];
            sp = std::max(sp, r);
            sm = std::max(sm, -r);
        }
        report.sup_plus[idx(pth)] = sp;
        report.sup_minus[idx(pth)] = sm;
    }

    report.quantile_levels = {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95};
    std::vector<double> sorted_p = report.sup_plus;
    std::vector<double> sorted_m = report.sup_minus;
    std::sort(sorted_p.begin(), sorted_p.end());
    std::sort(sorted_m.begin(), sorted_m.end());
    for (double q : report.quantile_levels) {
        report.quantiles_plus.push_back(quantile_type7(sorted_p, q));
        report.quantiles_minus.push_back(quantile_type7(sorted_m, q));
    }

    const double n_paths = static_cast<double>(ens.n_paths);
    const auto frac = [&](const std::vector<double>& sup, double thr, bool strict) {
        std::int64_t c = 0;
        for (double v : sup) c += strict ? (v > thr) : (v >= thr);
        return static_cast<double>(c) / n_paths;
    };
    report.frac_above_plus = frac(report.sup_plus, 1.0 + opts.eps_out, true);
    report.frac_above_minus = frac(report.sup_minus, 1.0 + opts.eps_out, true);
    report.frac_at_least_plus = frac(report.sup_plus, 1.0 - opts.eps_in, false);
    report.frac_at_least_minus = frac(report.sup_minus, 1.0 - opts.eps_in, false);
    return report;
}

MConvergenceReport m_convergence_report(const Ensemble& ens, const Normalizers& norm) {
    MConvergenceReport report;

    const auto m_of = [&](std::int64_t pth, std::size_t ci, std::int64_t n) {
        return (static_cast<double>(ens.s_at(pth, ci)) - norm.ES[idx(n)]) / norm.a[idx(n)];
    };

    for (std::size_t ci = 0; ci < ens.checkpoints.size(); ++ci) {
        const std::int64_t n = ens.checkpoints[ci];
        if (n < 1) continue;
        const auto it =
            std::lower_bound(ens.checkpoints.begin(), ens.checkpoints.end(), 2 * n);
        if (it == ens.checkpoints.end() || *it != 2 * n) continue;
        const auto cj = static_cast<std::size_t>(it - ens.checkpoints.begin());

        CompensatedSum sum;
        CompensatedSum sum_sq;
        for (std::int64_t pth = 0; pth < ens.n_paths; ++pth) {
            const double d = m_of(pth, cj, 2 * n) - m_of(pth, ci, n);
            sum += d * d;
            sum_sq += d * d * d * d;
        }
        const double np = static_cast<double>(ens.n_paths);
        MConvergencePair pair;
        pair.n = n;
        pair.n2 = 2 * n;
        pair.mean_sq_diff = sum.value() / np;
        const double var_of_sq =
            std::max(0.0, sum_sq.value() / np - pair.mean_sq_diff * pair.mean_sq_diff);
        pair.std_err = std::sqrt(var_of_sq / np);
        report.pairs.push_back(pair);
    }

    const SampleMoments mom = sample_moments(ens.m_hat);
    report.m_hat_mean = mom.mean;
    report.m_hat_var = mom.variance;
    const double np = static_cast<double>(ens.n_paths);
    report.m_hat_mean_se = std::sqrt(std::max(0.0, mom.variance) / np);
    report.m_hat_var_se = mom.variance * std::sqrt(2.0 / std::max(1.0, np - 1.0));
    report.degenerate = mom.variance == 0.0;
    return report;
}

namespace {

// Shared machinery of the Lemma-1 / Lemma-2 witnesses: per-index
// xi_k^2/a_k^2 with E[xi_k^2] = (2p-1)^2 alpha_k^2 Var(S_{k-1})/(k-1)^2 and
// Var(S_m) = VarM(m) a_m^2 taken from the ensemble anchors as a step
// function (clamped to the first/last anchor outside their range).
std::vector<double> xi2_over_a2_curve(const ModelParams& params, const Normalizers& norm,
                                      std::span<const std::int64_t> anchor_n,
                                      std::span<const double> anchor_var_m) {
    const double gamma2p = 2.0 * params.p - 1.0;
    std::vector<double> out(idx(norm.n_max) + 1, 0.0);
    if (anchor_n.empty()) return out;
    std::size_t ai = 0;
    for (std::int64_t k = 2; k <= norm.n_max; ++k) {
        while (ai + 1 < anchor_n.size() && anchor_n[ai + 1] <= k - 1) ++ai;
        const double var_m = anchor_var_m[ai];
        const double alpha_k = sequence_value(params.alpha, k);
        const double km1 = static_cast<double>(k - 1);
        const double var_s = var_m * norm.a[idx(k - 1)] * norm.a[idx(k - 1)];
        const double xi2 = gamma2p * gamma2p * alpha_k * alpha_k * var_s / (km1 * km1);
        out[idx(k)] = xi2 / (norm.a[idx(k)] * norm.a[idx(k)]);
    }
    return out;
}

// Suffix sums C[n] = sum_{k>=n} xi2_over_a2[k] (C[n_max+1] = 0).
std::vector<double> suffix_sums(const std::vector<double>& terms) {
    std::vector<double> suffix(terms.size() + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t k = terms.size(); k-- > 1;) {
        acc += terms[k];
        suffix[k] = acc.value();
    }
    return suffix;
}

}  // namespace

Lemma1Report lemma1_ratio_report(const ModelParams& params, const Ensemble& ens,
                                 const Normalizers& norm) {
    Lemma1Report report;
    report.used_a_inf = norm.a_inf.has_value();
    report.horizon = norm.n_max;

    for (std::size_t ci = 0; ci < ens.checkpoints.size(); ++ci) {
        const std::int64_t n = ens.checkpoints[ci];
        if (n < 1) continue;
        std::vector<double> m(idx(ens.n_paths));
        for (std::int64_t pth = 0; pth < ens.n_paths; ++pth)
            m[idx(pth)] =
                (static_cast<double>(ens.s_at(pth, ci)) - norm.ES[idx(n)]) / norm.a[idx(n)];
        report.anchor_n.push_back(n);
        report.anchor_var_m.push_back(sample_moments(m).variance);
    }

    const auto xi_curve = xi2_over_a2_curve(params, norm, report.anchor_n, report.anchor_var_m);
    const auto xi_suffix = suffix_sums(xi_curve);

    const double guard = norm.a_inf ? norm.a_inf2_tail_bound() : 0.0;

    for (std::int64_t n : report.anchor_n) {
        if (n >= norm.n_max) continue;
        const double base_tail = norm.a_inf
                                     ? norm.a_inf2() - norm.A2[idx(n)]
                                     : norm.A2[idx(norm.n_max)] - norm.A2[idx(n)];
        if (!(base_tail > guard) || base_tail <= 0.0) continue;  // denominator must be certified
        // s_{n+1}^2 = sum_{k>n} E[Y_k^2]; the xi part beyond the horizon is
        // dropped (it is O(VarM / n_max)).
        const double s2 = base_tail - xi_suffix[idx(n + 1)];
        Lemma1Row row;
        row.n = n;
        row.tail = base_tail;
        row.s2_next = s2;
        row.ratio = s2 / base_tail;
        report.rows.push_back(row);
    }
    return report;
}

SummabilityReport summability_report(const ModelParams& params, const Normalizers& norm,
                                     const Lemma1Report& lemma1,
                                     std::span<const std::int64_t> grid) {
    const auto xi_curve = xi2_over_a2_curve(params, norm, lemma1.anchor_n, lemma1.anchor_var_m);
    const auto xi_suffix = suffix_sums(xi_curve);

    SummabilityReport report;
    report.rows.reserve(grid.size());

    CompensatedSum sum_a2;
    CompensatedSum sum_a4;
    CompensatedSum sum_l2;
    std::size_t gi = 0;
    std::vector<std::int64_t> sorted_grid(grid.begin(), grid.end());
    std::sort(sorted_grid.begin(), sorted_grid.end());

    for (std::int64_t k = 1; k <= norm.n_max && gi < sorted_grid.size(); ++k) {
        const double inv2 = 1.0 / (norm.a[idx(k)] * norm.a[idx(k)]);
        const double inv4 = inv2 * inv2;
        sum_a2 += inv2;
        sum_a4 += inv4;
        // s_k^2 = sum_{j>=k} E[Y_j^2]
        const double base_tail = norm.a_inf
                                     ? norm.a_inf2() - norm.A2[idx(k - 1)]
                                     : norm.A2[idx(norm.n_max)] - norm.A2[idx(k - 1)];
        const double s2 = base_tail - xi_suffix[idx(k)];
        double term_l2 = kNaN;
        if (s2 > 0.0) {
            term_l2 = inv4 / (s2 * s2);
            sum_l2 += term_l2;
        }
        if (k == sorted_grid[gi]) {
            SummabilityRow row;
            row.n = k;
            row.sum_inv_a2 = sum_a2.value();
            row.ratio_inv_a2 = inv2 / row.sum_inv_a2;
            row.sum_inv_a4 = sum_a4.value();
            row.ratio_inv_a4 = inv4 / row.sum_inv_a4;
            row.sum_lemma2 = sum_l2.value();
            row.ratio_lemma2 = std::isnan(term_l2) ? kNaN : term_l2 / row.sum_lemma2;
            report.rows.push_back(row);
            while (gi < sorted_grid.size() && sorted_grid[gi] == k) ++gi;
        }
    }
    return report;
}

VarianceFloorReport variance_floor_report(const Normalizers& norm,
                                          std::span<const std::int64_t> grid,
                                          const Ensemble* ens) {
    VarianceFloorReport report;
    report.floor = std::numeric_limits<double>::infinity();
    for (std::int64_t n : grid) {
        if (n < 1 || n > norm.n_max) continue;
        VarianceFloorRow row;
        row.n = n;
        row.exact_var = 1.0 - norm.EX[idx(n)] * norm.EX[idx(n)];
        row.ensemble_var = kNaN;
        if (ens != nullptr) {
            // Cross-check: the mean increment over the checkpoint gap ending
            // at n estimates the average E[X] there; Var = 1 - E[X]^2.
            const auto it = std::lower_bound(ens->checkpoints.begin(), ens->checkpoints.end(), n);
            if (it != ens->checkpoints.end() && *it == n && it != ens->checkpoints.begin()) {
                const auto ci = static_cast<std::size_t>(it - ens->checkpoints.begin());
                const std::int64_t prev = ens->checkpoints[ci - 1];
                if (prev >= 0 && n > prev) {
                    CompensatedSum inc;
                    for (std::int64_t pth = 0; pth < ens->n_paths; ++pth)
                        inc += static_cast<double>(ens->s_at(pth, ci) - ens->s_at(pth, ci - 1));
                    const double mean_x = inc.value() / (static_cast<double>(ens->n_paths) *
                                                         static_cast<double>(n - prev));
                    row.ensemble_var = 1.0 - mean_x * mean_x;
                }
            }
        }
        report.floor = std::min(report.floor, row.exact_var);
        report.rows.push_back(row);
    }
    if (report.rows.empty()) report.floor = kNaN;
    return report;
}

}  // namespace derw
