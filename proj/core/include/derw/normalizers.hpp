// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "derw/model.hpp"

namespace derw {

/// Certified interval estimate of A_inf^2 = lim A_n^2.
///
/// The truth lies in [value - half_width, value + half_width]: the partial
/// sum A2[n_used] is a lower bound and the product/integral comparison of
/// the remaining tail gives the certified upper bound.
struct AInfEstimate {
    double value = 0.0;       // midpoint: A2[n_used] + half_width
    double half_width = 0.0;  // tail_bound / 2
    std::int64_t n_used = 0;  // depth the sums were extended to
};

/// Exact deterministic arrays of the walk: the growth normalizer a_n, the
/// moment recursions E[X_n], E[S_n], and the weighted sums A_n^2, B_n^2.
///
/// All arrays are sized n_max+1 and indexed by n directly; index 0 carries
/// the empty-sum conventions a_0 = 1, ES_0 = 0, A2_0 = B2_0 = 0 so that
/// n = 0 checkpoints are legal. EX[0] is unused and set to 0.
struct Normalizers {
    std::int64_t n_max = 0;
    std::vector<double> a;
    std::vector<double> EX;
    std::vector<double> ES;
    std::vector<double> A2;
    std::vector<double> B2;
    double sum_inv_a4 = 0.0;  // sum_{k<=n_max} 1/a_k^4, Lemma-2 diagnostics

    // Exact second-moment recursions (no estimation involved):
    //   Var(S_{n+1}) = (1 + 2 c1_{n+1}) Var(S_n) + 1 - E[X_{n+1}]^2,
    //   E[xi_{n+1}^2] = c1_{n+1}^2 Var(S_n),   c1_{n+1} = (2p-1) a_{n+1}/n,
    //   E[Y_n^2]     = (1 - E[X_n]^2 - E[xi_n^2]) / a_n^2,
    // so EY2_prefix[m] - EY2_prefix[n] = E[(M_m - M_n)^2] exactly by
    // martingale orthogonality.
    std::vector<double> var_s;       // Var(S_n)
    std::vector<double> ey2_prefix;  // sum_{k<=n} E[Y_k^2]

    std::optional<AInfEstimate> a_inf;

    /// A_inf^2 midpoint; only meaningful when a_inf is set.
    double a_inf2() const { return a_inf ? a_inf->value : 0.0; }

    /// Certified upper bound on A_inf^2 - A2[n_max] (0 when no estimate).
    double a_inf2_tail_bound() const {
        return a_inf ? a_inf->value + a_inf->half_width - A2[static_cast<std::size_t>(n_max)] : 0.0;
    }
};

/// a_1 = 1, a_n = prod_{k=1}^{n-1} (1 + (2p-1) alpha_{k+1} / k).
/// Throws DegenerateNormalizer when the k = 1 factor is exactly zero
/// (p = 0 with alpha_2 = 1). Returned vector is indexed as in Normalizers.
std::vector<double> compute_a(const ModelParams& params, std::int64_t n_max);

struct Moments {
    std::vector<double> EX;
    std::vector<double> ES;
};

/// E[X_1] = alpha_1 (2q-1) + (1-alpha_1)(2beta_1 - 1);
/// E[X_{n+1}] = alpha_{n+1} (2p-1) E[S_n]/n + (1-alpha_{n+1})(2beta_{n+1}-1).
Moments compute_moments(const ModelParams& params, std::int64_t n_max);

struct WeightedSums {
    std::vector<double> A2;
    std::vector<double> B2;
};

/// A_n^2 = sum_{k<=n} (1/a_k^2)(1 - E[X_k]^2), B_n^2 = sum_{k<=n} 1/a_k^2.
WeightedSums compute_A2_B2(const std::vector<double>& a, const std::vector<double>& EX);

/// Builds all arrays for one parameter set (no A_inf^2 estimate attached).
Normalizers compute_normalizers(const ModelParams& params, std::int64_t n_max);

struct AInfOptions {
    double rel_tol = 1e-3;
    double abs_tol = 1e-6;              // floor for the degenerate A_inf^2 = 0 case
    std::int64_t budget = 100'000'000;  // hard cap on the extension depth
};

/// Extends the A_n^2 sum until the certified tail bound drops below
/// rel_tol * A2[n], using gamma' = (2p-1) inf_{k>n} alpha_{k+1} and the
/// comparison a_k >= a_n prod_{l=n}^{k-1}(1 + gamma'/l), which bounds the
/// tail by n / (a_n^2 (2 gamma' - 1)).
///
/// Throws NotSummable when gamma' <= 1/2 (Lemma-10 infinite case) and
/// BudgetExceeded when the cap is hit first.
AInfEstimate estimate_A_inf(const ModelParams& params, const AInfOptions& opts = {});

/// Convenience: compute_normalizers + estimate_A_inf attached.
Normalizers compute_normalizers_with_a_inf(const ModelParams& params, std::int64_t n_max,
                                           const AInfOptions& opts = {});

/// Theorem-3 CLT scale a_n sqrt(A_inf^2 - A_n^2). Throws ScaleDegenerate
/// when the difference does not exceed the certified truncation error.
double fluctuation_scale(std::int64_t n, const Normalizers& norm);

struct LilEnvelopeOptions {
    /// A checkpoint is usable only where log|log t| >= loglog_floor with
    /// t = A_inf^2 - A_n^2. The envelope is identically imaginary for
    /// t in (1/e, e) and collapses to zero at the edges, so a positive
    /// floor (not just a point guard at t = 1/e) is required for the
    /// ratio statistic to be readable.
    double loglog_floor = 0.5;
};

/// Theorem-3 LIL envelope a_n sqrt(2 t log|log t|), t = A_inf^2 - A_n^2.
/// Throws EnvelopeUndefined when the floor guard excludes the checkpoint,
/// ScaleDegenerate as in fluctuation_scale.
double lil_envelope(std::int64_t n, const Normalizers& norm, const LilEnvelopeOptions& opts = {});

/// Theorem-1 CLT scale a_n A_n alone (no log-log factor); throws
/// ScaleDegenerate for A_n^2 = 0.
double weak_clt_scale(std::int64_t n, const Normalizers& norm);

struct WeakScales {
    double clt_scale = 0.0;  // a_n A_n
    double lil_scale = 0.0;  // a_n A_n sqrt(2 log log A_n)
};

/// Theorem-1 scales. The LIL factor uses log log of A_n = sqrt(A_n^2),
/// exactly as printed there (the Theorem-3 envelope instead takes
/// log|log .| of the squared quantity; the two are intentionally not
/// harmonized). Throws ScaleDegenerate for A_n = 0 and EnvelopeUndefined
/// for A_n <= e in the LIL factor.
WeakScales weak_scales(std::int64_t n, const Normalizers& norm);

}  // namespace derw
