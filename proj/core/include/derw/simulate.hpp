// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "derw/model.hpp"
#include "derw/normalizers.hpp"

namespace derw {

/// Two equivalent path samplers.
///
/// StateOnly draws each increment from its conditional law given S_n, which
/// depends on the past only through S_n. MemorySampling follows the explicit
/// construction: flip a delta coin with weight alpha_{n+1}; on success copy a
/// uniformly chosen past increment (kept with probability p, flipped
/// otherwise), on failure take a fresh step with bias beta_{n+1}. Both induce
/// the same law of (S_1, ..., S_n).
enum class SimBackend { state_only, memory_sampling };

/// One simulated path, recorded at the requested checkpoints.
struct PathRun {
    std::uint64_t path_index = 0;
    std::uint64_t seed = 0;  // master seed of the ensemble this path belongs to
    std::vector<std::int64_t> checkpoints;
    std::vector<std::int64_t> S_at;
    double M_hat = 0.0;  // (S_{n_max} - E[S_{n_max}]) / a_{n_max}
};

/// Exact distribution of S_n on its support {-n, -n+2, ..., n}.
struct ExactDist {
    std::int64_t n = 0;
    std::vector<double> probs;  // probs[i] = P(S_n = -n + 2i), size n+1

    double support(std::size_t i) const { return static_cast<double>(-n + 2 * static_cast<std::int64_t>(i)); }
    double mean() const;
    double variance() const;
};

/// Per-step sampling coefficients shared by both backends and the exact DP:
/// cond mean at step n (for n >= 2) is c1[n] * S_{n-1} + c2[n].
struct SimCoeffs {
    double ex1 = 0.0;  // E[X_1]
    double p = 0.5;    // repeat probability of the memory sampler
    std::vector<double> c1;
    std::vector<double> c2;
    std::vector<double> alpha;
    std::vector<double> beta;

    static SimCoeffs build(const ModelParams& params, std::int64_t n_max);
};

/// Simulates one path. Checkpoints must be sorted, unique and within
/// [0, n_max]; norm must cover n_max (else NormalizerTooShort).
PathRun simulate_path(const ModelParams& params, const Normalizers& norm, std::int64_t n_max,
                      std::span<const std::int64_t> checkpoints, std::uint64_t master_seed,
                      std::uint64_t path_index, SimBackend backend);

/// Forward DP over the signed-position lattice; O(n^2) time, O(n) memory.
/// Throws CapExceeded past n_cap.
ExactDist exact_distribution(const ModelParams& params, std::int64_t n,
                             std::int64_t n_cap = 2000);

/// A full ensemble, stored checkpoint-major per path. Path i is always
/// generated from the stream (master_seed, i), so results are identical for
/// every worker_count and ordered by path index.
struct Ensemble {
    std::uint64_t master_seed = 0;
    SimBackend backend = SimBackend::state_only;
    std::int64_t n_max = 0;
    std::vector<std::int64_t> checkpoints;
    std::int64_t n_paths = 0;
    std::vector<std::int64_t> S;   // size n_paths * checkpoints.size(), path-major
    std::vector<double> m_hat;     // size n_paths

    std::int64_t s_at(std::int64_t path, std::size_t cp_idx) const {
        return S[static_cast<std::size_t>(path) * checkpoints.size() + cp_idx];
    }
    PathRun path_run(std::int64_t path) const;
};

Ensemble run_ensemble(const ModelParams& params, const Normalizers& norm, std::int64_t n_max,
                      std::span<const std::int64_t> checkpoints, std::int64_t n_paths,
                      std::uint64_t master_seed, SimBackend backend, int worker_count);

}  // namespace derw
