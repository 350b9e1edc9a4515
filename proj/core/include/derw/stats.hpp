// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "derw/normalizers.hpp"
#include "derw/simulate.hpp"

namespace derw {

/// Standard normal CDF via the C library erfc (|error| well below 1e-10;
/// glibc evaluates erfc to within a couple of ulp). Built so that
/// normal_cdf(x) + normal_cdf(-x) == 1 holds exactly in floating point.
double normal_cdf(double x);

/// Asymptotic Kolmogorov tail Q(lambda) = P(sup > lambda) = 2 sum_{j>=1}
/// (-1)^{j-1} exp(-2 j^2 lambda^2), evaluated through the Jacobi-theta form
/// for small lambda; both branches agree to ~1e-10 at the crossover.
double kolmogorov_q(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov against N(0,1); asymptotic p-value.
/// Requires >= 50 samples (TooFewSamples otherwise).
KsResult ks_test_normal(std::span<const double> samples);

/// Two-sample Kolmogorov-Smirnov with the asymptotic p-value at effective
/// size na*nb/(na+nb). Requires >= 50 samples on each side.
KsResult two_sample_ks(std::span<const double> a, std::span<const double> b);

struct SampleMoments {
    std::int64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1)
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

SampleMoments sample_moments(std::span<const double> samples);

/// Which normalization the CLT verdict is computed under.
enum class ScaleKind { thm3_strong, thm1_weak, kubota_takei_root_n };

const char* to_string(ScaleKind k);

struct CltRow {
    std::int64_t n = 0;
    std::int64_t samples = 0;
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_statistic = 0.0;
    double ks_p_value = 0.0;
};

struct CltReport {
    ScaleKind scale_kind = ScaleKind::thm1_weak;
    std::vector<CltRow> rows;
    std::vector<std::int64_t> skipped_checkpoints;  // separation or degenerate scale
};

struct CltOptions {
    /// Drift-subtracting kinds only use checkpoints n <= n_max / separation.
    std::int64_t separation_factor = 100;
};

/// Normalized fluctuation statistics per checkpoint.
///
/// thm1_weak:           Z = (S_n - E[S_n]) / (a_n A_n)
/// kubota_takei_root_n: Z = (S_n - E[S_n] - a_n M_hat) / sqrt(n)
/// thm3_strong:         Z = (S_n - E[S_n] - a_n M_hat) / (a_n s(n, m))
///
/// where m is the horizon the drift estimate was taken at (the ensemble's
/// n_max) and s(n, m)^2 = sum_{n<k<=m} E[Y_k^2] is the exact variance of
/// M_n - M_hat from the Normalizers recursion. The limit scale prints as
/// a_n sqrt(A_inf^2 - A_n^2); s(n, m) converges to it as m -> inf, but at
/// desk scale the drift estimate still carries (m/n)^{-(2 gamma - 1)} of
/// the tail variance, which is far from negligible, so s(n, m) is what
/// actually converges to N(0,1).
CltReport clt_report(const Ensemble& ens, const Normalizers& norm, ScaleKind kind,
                     const CltOptions& opts = {});

struct LilReport {
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    std::vector<std::int64_t> used_checkpoints;
    std::vector<std::int64_t> excluded_checkpoints;
    std::vector<std::string> exclusion_reasons;  // parallel to excluded_checkpoints
    // Per-path sup over the usable window of +R_n and -R_n; inf of R_n is
    // -sup of the opposite sign.
    std::vector<double> sup_plus;
    std::vector<double> sup_minus;
    std::vector<double> quantile_levels;
    std::vector<double> quantiles_plus;
    std::vector<double> quantiles_minus;
    double frac_above_plus = 0.0;     // sup(+R) > 1 + eps_out
    double frac_above_minus = 0.0;
    double frac_at_least_plus = 0.0;  // sup(+R) >= 1 - eps_in
    double frac_at_least_minus = 0.0;
};

struct LilOptions {
    double eps_out = 0.5;
    double eps_in = 0.5;
    LilEnvelopeOptions envelope{};
};

/// Envelope-ratio statistics R_n = (S_n - E[S_n] - a_n M_hat) / lil_envelope(n)
/// over the checkpoints inside [n_lo, n_hi]. Checkpoints where the envelope
/// is undefined are excluded and listed. Throws WindowEmpty if none remain.
LilReport lil_report(const Ensemble& ens, const Normalizers& norm, std::int64_t n_lo,
                     std::int64_t n_hi, const LilOptions& opts = {});

struct MConvergencePair {
    std::int64_t n = 0;
    std::int64_t n2 = 0;  // 2n
    double mean_sq_diff = 0.0;  // E[(M_{2n} - M_n)^2]
    double std_err = 0.0;
};

struct MConvergenceReport {
    std::vector<MConvergencePair> pairs;
    double m_hat_mean = 0.0;
    double m_hat_mean_se = 0.0;
    double m_hat_var = 0.0;
    double m_hat_var_se = 0.0;  // normal-approx se of the variance estimate
    bool degenerate = false;    // all residuals and the variance are zero
};

/// L^2 Cauchy diagnostics of M_n -> M over the dyadic checkpoint pairs
/// present in the ensemble, plus the non-degeneracy statistics of M_hat.
MConvergenceReport m_convergence_report(const Ensemble& ens, const Normalizers& norm);

struct Lemma1Row {
    std::int64_t n = 0;
    double s2_next = 0.0;  // estimated s_{n+1}^2
    double tail = 0.0;     // A_inf^2 - A_n^2 (or horizon difference)
    double ratio = 0.0;
};

struct Lemma1Report {
    std::vector<Lemma1Row> rows;
    bool used_a_inf = false;     // false: tails taken to the horizon n_max
    std::int64_t horizon = 0;    // depth the xi-corrections were summed to
    // Ensemble anchors the xi^2 estimate was built from, kept so downstream
    // reports can extend the same curve.
    std::vector<std::int64_t> anchor_n;
    std::vector<double> anchor_var_m;
};

/// Lemma-1 witness: s_{n+1}^2 / (A_inf^2 - A_n^2) -> 1, with
/// E[Y_k^2] = (1 - E[X_k]^2 - E[xi_k^2]) / a_k^2 and E[xi_k^2] estimated
/// through the exact identity xi_k = (2p-1) alpha_k (S_{k-1} - E[S_{k-1}])/(k-1)
/// and the ensemble variance of M at the checkpoints.
Lemma1Report lemma1_ratio_report(const ModelParams& params, const Ensemble& ens,
                                 const Normalizers& norm);

struct SummabilityRow {
    std::int64_t n = 0;
    double sum_inv_a2 = 0.0;
    double ratio_inv_a2 = 0.0;  // last increment / partial sum
    double sum_inv_a4 = 0.0;
    double ratio_inv_a4 = 0.0;
    double sum_lemma2 = 0.0;    // sum of 1/(s_k^4 a_k^4)
    double ratio_lemma2 = 0.0;
};

struct SummabilityReport {
    std::vector<SummabilityRow> rows;
};

/// Partial sums of 1/a_n^2, 1/a_n^4 and 1/(s_n^4 a_n^4) at the grid points,
/// with last-increment-to-sum ratios as convergence witnesses. s_n^2 comes
/// from the Lemma-1 curve (extended with its last variance anchor past the
/// ensemble horizon).
SummabilityReport summability_report(const ModelParams& params, const Normalizers& norm,
                                     const Lemma1Report& lemma1,
                                     std::span<const std::int64_t> grid);

struct VarianceFloorRow {
    std::int64_t n = 0;
    double exact_var = 0.0;        // 1 - E[X_n]^2 from the moment recursion
    double ensemble_var = 0.0;     // windowed-increment cross-check, NaN if n/a
};

struct VarianceFloorReport {
    std::vector<VarianceFloorRow> rows;
    double floor = 0.0;  // min of exact_var over the grid
};

/// Lemma-12 witness: Var[X_n] = 1 - E[X_n]^2 over the grid, cross-checked
/// by the mean increment of the ensemble between adjacent checkpoints.
VarianceFloorReport variance_floor_report(const Normalizers& norm,
                                          std::span<const std::int64_t> grid,
                                          const Ensemble* ens = nullptr);

}  // namespace derw
