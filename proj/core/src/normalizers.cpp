// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "derw/normalizers.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "derw/compensated.hpp"
#include "derw/errors.hpp"

namespace derw {

namespace {

std::size_t idx(std::int64_t n) { return static_cast<std::size_t>(n); }

}  // namespace

std::vector<double> compute_a(const ModelParams& params, std::int64_t n_max) {
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    const double gamma2p = 2.0 * params.p - 1.0;
    std::vector<double> a(idx(n_max) + 1);
    a[0] = 1.0;  // empty-product convention
    a[1] = 1.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        const double factor =
            1.0 + gamma2p * sequence_value(params.alpha, n) / static_cast<double>(n - 1);
        if (factor <= 0.0)
            throw DegenerateNormalizer("a_2 factor vanishes (p = 0 with alpha_2 = 1)");
        a[idx(n)] = a[idx(n - 1)] * factor;
    }
    return a;
}

Moments compute_moments(const ModelParams& params, std::int64_t n_max) {
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    const double gamma2p = 2.0 * params.p - 1.0;
    Moments m;
    m.EX.assign(idx(n_max) + 1, 0.0);
    m.ES.assign(idx(n_max) + 1, 0.0);

    const double alpha1 = sequence_value(params.alpha, 1);
    m.EX[1] = alpha1 * (2.0 * params.q - 1.0) + (1.0 - alpha1) * (2.0 * sequence_value(params.beta, 1) - 1.0);

    CompensatedSum es;
    es += m.EX[1];
    m.ES[1] = es.value();
    for (std::int64_t n = 1; n < n_max; ++n) {
        const double alpha_next = sequence_value(params.alpha, n + 1);
        const double beta_next = sequence_value(params.beta, n + 1);
        m.EX[idx(n + 1)] = alpha_next * gamma2p * m.ES[idx(n)] / static_cast<double>(n) +
                           (1.0 - alpha_next) * (2.0 * beta_next - 1.0);
        es += m.EX[idx(n + 1)];
        m.ES[idx(n + 1)] = es.value();
    }
    return m;
}

WeightedSums compute_A2_B2(const std::vector<double>& a, const std::vector<double>& EX) {
    if (a.size() != EX.size() || a.size() < 2)
        throw InvalidParameter("a and EX must have equal length covering n >= 1");
    WeightedSums w;
    w.A2.assign(a.size(), 0.0);
    w.B2.assign(a.size(), 0.0);
    CompensatedSum a2_sum;
    CompensatedSum b2_sum;
    for (std::size_t k = 1; k < a.size(); ++k) {
        const double inv = 1.0 / (a[k] * a[k]);
        a2_sum += inv * (1.0 - EX[k] * EX[k]);
        b2_sum += inv;
        w.A2[k] = a2_sum.value();
        w.B2[k] = b2_sum.value();
    }
    return w;
}

Normalizers compute_normalizers(const ModelParams& params, std::int64_t n_max) {
    validate_params(params);
    Normalizers norm;
    norm.n_max = n_max;
    norm.a = compute_a(params, n_max);
    auto moments = compute_moments(params, n_max);
    norm.EX = std::move(moments.EX);
    norm.ES = std::move(moments.ES);
    auto sums = compute_A2_B2(norm.a, norm.EX);
    norm.A2 = std::move(sums.A2);
    norm.B2 = std::move(sums.B2);
    CompensatedSum inv4;
    for (std::size_t k = 1; k < norm.a.size(); ++k) {
        const double inv2 = 1.0 / (norm.a[k] * norm.a[k]);
        inv4 += inv2 * inv2;
    }
    norm.sum_inv_a4 = inv4.value();

    const double gamma2p = 2.0 * params.p - 1.0;
    norm.var_s.assign(norm.a.size(), 0.0);
    norm.ey2_prefix.assign(norm.a.size(), 0.0);
    norm.var_s[1] = 1.0 - norm.EX[1] * norm.EX[1];
    CompensatedSum ey2;
    ey2 += norm.var_s[1];  // E[Y_1^2], a_1 = 1 and xi_1 = 0
    norm.ey2_prefix[1] = ey2.value();
    for (std::int64_t n = 1; n < n_max; ++n) {
        const double c1 = gamma2p * sequence_value(params.alpha, n + 1) / static_cast<double>(n);
        const double ex_next = norm.EX[idx(n + 1)];
        const double xi2 = c1 * c1 * norm.var_s[idx(n)];
        norm.var_s[idx(n + 1)] =
            (1.0 + 2.0 * c1) * norm.var_s[idx(n)] + 1.0 - ex_next * ex_next;
        const double a_next = norm.a[idx(n + 1)];
        ey2 += (1.0 - ex_next * ex_next - xi2) / (a_next * a_next);
        norm.ey2_prefix[idx(n + 1)] = ey2.value();
    }
    return norm;
}

AInfEstimate estimate_A_inf(const ModelParams& params, const AInfOptions& opts) {
    validate_params(params);
    const double gamma2p = 2.0 * params.p - 1.0;
    const double gamma_lim = gamma2p * sequence_limits(params.alpha).liminf;
    if (gamma_lim <= 0.5)
        throw NotSummable("(2p-1) liminf(alpha) <= 1/2: B_inf^2 = inf (Lemma-10 case)");

    // Stream the recursions; no arrays are kept.
    double a = 1.0;
    CompensatedSum es;
    CompensatedSum a2;
    double ex = sequence_value(params.alpha, 1) * (2.0 * params.q - 1.0) +
                (1.0 - sequence_value(params.alpha, 1)) * (2.0 * sequence_value(params.beta, 1) - 1.0);
    es += ex;
    a2 += 1.0 - ex * ex;  // k = 1 term, a_1 = 1

    constexpr std::int64_t kCheckEvery = 1024;
    std::int64_t n = 1;
    const auto try_finish = [&](std::int64_t depth) -> std::optional<AInfEstimate> {
        const double gamma_tail = gamma2p * sequence_tail_inf(params.alpha, depth);
        if (gamma_tail <= 0.5) return std::nullopt;
        const double tail_bound =
            static_cast<double>(depth) / (a * a * (2.0 * gamma_tail - 1.0));
        const double target = std::max(opts.rel_tol * a2.value(), opts.abs_tol);
        if (tail_bound > target) return std::nullopt;
        return AInfEstimate{a2.value() + 0.5 * tail_bound, 0.5 * tail_bound, depth};
    };
    while (true) {
        if (n % kCheckEvery == 0 || n == 1 || n >= opts.budget) {
            if (auto done = try_finish(n)) return *done;
        }
        if (n >= opts.budget)
            throw BudgetExceeded("A_inf^2 tolerance not reached within the configured budget");
        // Advance to index n+1.
        const double alpha_next = sequence_value(params.alpha, n + 1);
        const double beta_next = sequence_value(params.beta, n + 1);
        const double factor = 1.0 + gamma2p * alpha_next / static_cast<double>(n);
        if (factor <= 0.0)
            throw DegenerateNormalizer("a_2 factor vanishes (p = 0 with alpha_2 = 1)");
        const double ex_next =
            alpha_next * gamma2p * es.value() / static_cast<double>(n) +
            (1.0 - alpha_next) * (2.0 * beta_next - 1.0);
        a *= factor;
        es += ex_next;
        a2 += (1.0 - ex_next * ex_next) / (a * a);
        ++n;
    }
}

Normalizers compute_normalizers_with_a_inf(const ModelParams& params, std::int64_t n_max,
                                           const AInfOptions& opts) {
    Normalizers norm = compute_normalizers(params, n_max);
    norm.a_inf = estimate_A_inf(params, opts);
    return norm;
}

namespace {

double thm3_tail(std::int64_t n, const Normalizers& norm) {
    if (!norm.a_inf) throw ScaleDegenerate("no A_inf^2 estimate attached to Normalizers");
    if (n < 0 || n > norm.n_max) throw InvalidParameter("checkpoint outside normalizer range");
    const double t = norm.a_inf->value - norm.A2[idx(n)];
    if (t <= norm.a_inf2_tail_bound())
        throw ScaleDegenerate("A_inf^2 - A_n^2 within the truncation error: checkpoint too deep");
    return t;
}

}  // namespace

double fluctuation_scale(std::int64_t n, const Normalizers& norm) {
    const double t = thm3_tail(n, norm);
    return norm.a[idx(n)] * std::sqrt(t);
}

double lil_envelope(std::int64_t n, const Normalizers& norm, const LilEnvelopeOptions& opts) {
    const double t = thm3_tail(n, norm);
    if (t == 1.0) throw EnvelopeUndefined("log|log t| undefined at t = 1");
    const double loglog = std::log(std::abs(std::log(t)));
    if (!(loglog >= opts.loglog_floor))
        throw EnvelopeUndefined("log|log t| below the envelope floor");
    return norm.a[idx(n)] * std::sqrt(2.0 * t * loglog);
}

double weak_clt_scale(std::int64_t n, const Normalizers& norm) {
    if (n < 0 || n > norm.n_max) throw InvalidParameter("checkpoint outside normalizer range");
    const double A2n = norm.A2[idx(n)];
    if (A2n <= 0.0) throw ScaleDegenerate("A_n^2 = 0");
    return norm.a[idx(n)] * std::sqrt(A2n);
}

WeakScales weak_scales(std::int64_t n, const Normalizers& norm) {
    WeakScales s;
    s.clt_scale = weak_clt_scale(n, norm);
    const double A_n = std::sqrt(norm.A2[idx(n)]);
    if (!(A_n > std::exp(1.0)))
        throw EnvelopeUndefined("A_n <= e: log log A_n not positive");
    s.lil_scale = s.clt_scale * std::sqrt(2.0 * std::log(std::log(A_n)));
    return s;
}

}  // namespace derw
