// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "derw/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <thread>

#include "derw/compensated.hpp"
#include "derw/errors.hpp"
#include "derw/rng.hpp"

namespace derw {

namespace {

std::size_t idx(std::int64_t n) { return static_cast<std::size_t>(n); }

double clamp_cond(double v) { return std::min(1.0, std::max(-1.0, v)); }

// Role indices of the per-step coin streams.
constexpr std::uint32_t kRoleStep = 0;    // state-only increment / delta coin
constexpr std::uint32_t kRoleIndex = 1;   // uniform past index
constexpr std::uint32_t kRoleRepeat = 2;  // repeat-vs-flip coin
constexpr std::uint32_t kRoleEnv = 3;     // environment coin

void check_checkpoints(std::span<const std::int64_t> checkpoints, std::int64_t n_max) {
    std::int64_t prev = -1;
    for (std::int64_t c : checkpoints) {
        if (c < 0 || c > n_max) throw InvalidParameter("checkpoint outside [0, n_max]");
        if (c <= prev) throw InvalidParameter("checkpoints must be sorted and unique");
        prev = c;
    }
}

// Increment history of one path, 1 bit per step.
class BitHistory {
  public:
    explicit BitHistory(std::int64_t n_max) : words_(idx(n_max) / 64 + 1, 0) {}

    void set(std::int64_t step, bool up) {
        if (up) words_[idx(step) >> 6] |= std::uint64_t{1} << (idx(step) & 63);
    }
    int increment(std::int64_t step) const {
        return ((words_[idx(step) >> 6] >> (idx(step) & 63)) & 1u) ? 1 : -1;
    }

  private:
    std::vector<std::uint64_t> words_;
};

// Runs one path and fills S at the checkpoints; returns S_{n_max}.
std::int64_t sample_path(const SimCoeffs& coeffs, std::int64_t n_max,
                         std::span<const std::int64_t> checkpoints, const StreamRng& rng,
                         SimBackend backend, std::int64_t* s_out) {
    std::size_t cp = 0;
    if (cp < checkpoints.size() && checkpoints[cp] == 0) s_out[cp++] = 0;

    std::int64_t s = 0;
    if (backend == SimBackend::state_only) {
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const double cond =
                n == 1 ? coeffs.ex1
                       : clamp_cond(coeffs.c1[idx(n)] * static_cast<double>(s) + coeffs.c2[idx(n)]);
            const int x = rng.uniform(static_cast<std::uint64_t>(n), kRoleStep) < 0.5 * (1.0 + cond)
                              ? 1
                              : -1;
            assert(std::abs(static_cast<double>(x) - cond) <= 2.0 + 1e-12);
            s += x;
            if (cp < checkpoints.size() && checkpoints[cp] == n) s_out[cp++] = s;
        }
    } else {
        BitHistory history(n_max);
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const auto step = static_cast<std::uint64_t>(n);
            int x;
            if (n == 1) {
                // First step straight from the two-point law of E[X_1].
                x = rng.uniform(step, kRoleStep) < 0.5 * (1.0 + coeffs.ex1) ? 1 : -1;
            } else if (rng.uniform(step, kRoleStep) < coeffs.alpha[idx(n)]) {
                // Memory step: copy a uniformly chosen past increment and keep
                // it with probability p. The index is uniform on {1, ..., n-1}
                // (the displayed conditional-mean derivation averages exactly
                // the first n-1 increments).
                const double u = rng.uniform(step, kRoleIndex);
                const std::int64_t past = 1 + std::min<std::int64_t>(
                                                  n - 2, static_cast<std::int64_t>(
                                                             u * static_cast<double>(n - 1)));
                const int keep = rng.uniform(step, kRoleRepeat) < coeffs.p ? 1 : -1;
                x = keep * history.increment(past);
            } else {
                x = rng.uniform(step, kRoleEnv) < coeffs.beta[idx(n)] ? 1 : -1;
            }
            history.set(n, x > 0);
            s += x;
            if (cp < checkpoints.size() && checkpoints[cp] == n) s_out[cp++] = s;
        }
    }
    return s;
}

}  // namespace

SimCoeffs SimCoeffs::build(const ModelParams& params, std::int64_t n_max) {
    validate_params(params);
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    SimCoeffs coeffs;
    const double gamma2p = 2.0 * params.p - 1.0;
    coeffs.p = params.p;
    coeffs.c1.assign(idx(n_max) + 1, 0.0);
    coeffs.c2.assign(idx(n_max) + 1, 0.0);
    coeffs.alpha.assign(idx(n_max) + 1, 0.0);
    coeffs.beta.assign(idx(n_max) + 1, 0.0);
    for (std::int64_t n = 1; n <= n_max; ++n) {
        coeffs.alpha[idx(n)] = sequence_value(params.alpha, n);
        coeffs.beta[idx(n)] = sequence_value(params.beta, n);
        if (n >= 2) {
            coeffs.c1[idx(n)] = coeffs.alpha[idx(n)] * gamma2p / static_cast<double>(n - 1);
            coeffs.c2[idx(n)] = (1.0 - coeffs.alpha[idx(n)]) * (2.0 * coeffs.beta[idx(n)] - 1.0);
        }
    }
    coeffs.ex1 = coeffs.alpha[1] * (2.0 * params.q - 1.0) +
                 (1.0 - coeffs.alpha[1]) * (2.0 * coeffs.beta[1] - 1.0);
    return coeffs;
}

double ExactDist::mean() const {
    CompensatedSum m;
    for (std::size_t i = 0; i < probs.size(); ++i) m += probs[i] * support(i);
    return m.value();
}

double ExactDist::variance() const {
    const double mu = mean();
    CompensatedSum v;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double d = support(i) - mu;
        v += probs[i] * d * d;
    }
    return v.value();
}

PathRun simulate_path(const ModelParams& params, const Normalizers& norm, std::int64_t n_max,
                      std::span<const std::int64_t> checkpoints, std::uint64_t master_seed,
                      std::uint64_t path_index, SimBackend backend) {
    if (n_max > norm.n_max)
        throw NormalizerTooShort("n_max exceeds the range the Normalizers cover");
    check_checkpoints(checkpoints, n_max);
    const SimCoeffs coeffs = SimCoeffs::build(params, n_max);

    PathRun run;
    run.path_index = path_index;
    run.seed = master_seed;
    run.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    run.S_at.resize(checkpoints.size());
    const StreamRng rng(master_seed, path_index);
    const std::int64_t s_final =
        sample_path(coeffs, n_max, checkpoints, rng, backend, run.S_at.data());
    run.M_hat = (static_cast<double>(s_final) - norm.ES[idx(n_max)]) / norm.a[idx(n_max)];
    return run;
}

ExactDist exact_distribution(const ModelParams& params, std::int64_t n, std::int64_t n_cap) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    if (n > n_cap) throw CapExceeded("exact_distribution n exceeds the O(n^2) cap");
    const SimCoeffs coeffs = SimCoeffs::build(params, n);

    // probs[i] = P(S_k = -k + 2i) over i = 0..k.
    std::vector<double> cur(2, 0.0);
    cur[0] = 0.5 * (1.0 - coeffs.ex1);
    cur[1] = 0.5 * (1.0 + coeffs.ex1);
    for (std::int64_t k = 1; k < n; ++k) {
        std::vector<double> next(idx(k) + 2, 0.0);
        for (std::int64_t i = 0; i <= k; ++i) {
            const double mass = cur[idx(i)];
            if (mass == 0.0) continue;
            const double s = static_cast<double>(-k + 2 * i);
            const double cond = clamp_cond(coeffs.c1[idx(k + 1)] * s + coeffs.c2[idx(k + 1)]);
            next[idx(i + 1)] += mass * 0.5 * (1.0 + cond);
            next[idx(i)] += mass * 0.5 * (1.0 - cond);
        }
        cur = std::move(next);
    }

    ExactDist dist;
    dist.n = n;
    dist.probs = std::move(cur);
    return dist;
}

PathRun Ensemble::path_run(std::int64_t path) const {
    PathRun run;
    run.path_index = static_cast<std::uint64_t>(path);
    run.seed = master_seed;
    run.checkpoints = checkpoints;
    run.S_at.assign(S.begin() + path * static_cast<std::int64_t>(checkpoints.size()),
                    S.begin() + (path + 1) * static_cast<std::int64_t>(checkpoints.size()));
    run.M_hat = m_hat[idx(path)];
    return run;
}

Ensemble run_ensemble(const ModelParams& params, const Normalizers& norm, std::int64_t n_max,
                      std::span<const std::int64_t> checkpoints, std::int64_t n_paths,
                      std::uint64_t master_seed, SimBackend backend, int worker_count) {
    if (n_paths < 1) throw InvalidParameter("n_paths must be >= 1");
    if (worker_count < 1) throw InvalidParameter("worker_count must be >= 1");
    if (n_max > norm.n_max)
        throw NormalizerTooShort("n_max exceeds the range the Normalizers cover");
    check_checkpoints(checkpoints, n_max);
    const SimCoeffs coeffs = SimCoeffs::build(params, n_max);

    Ensemble ens;
    ens.master_seed = master_seed;
    ens.backend = backend;
    ens.n_max = n_max;
    ens.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    ens.n_paths = n_paths;
    ens.S.resize(idx(n_paths) * ens.checkpoints.size());
    ens.m_hat.resize(idx(n_paths));

    const double es_final = norm.ES[idx(n_max)];
    const double a_final = norm.a[idx(n_max)];
    const auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const StreamRng rng(master_seed, static_cast<std::uint64_t>(i));
            const std::int64_t s_final =
                sample_path(coeffs, n_max, ens.checkpoints, rng, backend,
                            ens.S.data() + idx(i) * ens.checkpoints.size());
            ens.m_hat[idx(i)] = (static_cast<double>(s_final) - es_final) / a_final;
        }
    };

    const int workers = static_cast<int>(std::min<std::int64_t>(worker_count, n_paths));
    if (workers == 1) {
        run_range(0, n_paths);
    } else {
        // Static partition; placement is by path index, so the split has no
        // effect on the output.
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const std::int64_t chunk = (n_paths + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t lo = std::min<std::int64_t>(n_paths, w * chunk);
            const std::int64_t hi = std::min<std::int64_t>(n_paths, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    return ens;
}

}  // namespace derw
