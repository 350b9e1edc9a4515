// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-side oracles, independent of the library implementation paths they
// check: closed forms via lgamma, extended-precision recomputations of the
// normalizer sums, a hand-rolled moment recursion, and a Box-Muller normal
// sampler for statistical self-tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "derw/model.hpp"
#include "derw/sequence.hpp"

namespace oracles {

/// log(Gamma(z + g) / Gamma(z)) evaluated to ~1e-12 absolute. The naive
/// lgamma difference loses ~4e-10 relative accuracy by z = 1e5 (two 1e6-
/// sized logs each rounded to a couple ulp), so for large z the Stirling
/// form of the difference is used, with the large cancelling terms combined
/// through log1p before any rounding can bite.
inline double lgamma_ratio(double z, double g) {
    if (z <= 1000.0) return std::lgamma(z + g) - std::lgamma(z);
    const double zg = z + g;
    // (z+g-1/2) ln(z+g) - (z-1/2) ln z = (z-1/2) log1p(g/z) + g ln(z+g)
    double d = (z - 0.5) * std::log1p(g / z) + g * std::log(zg) - g;
    d += (1.0 / 12.0) * (1.0 / zg - 1.0 / z);
    d -= (1.0 / 360.0) * (1.0 / (zg * zg * zg) - 1.0 / (z * z * z));
    d += (1.0 / 1260.0) * (1.0 / std::pow(zg, 5) - 1.0 / std::pow(z, 5));
    return d;
}

/// Closed form for constant alpha: a_n = Gamma(n + g) / (Gamma(n) Gamma(1 + g))
/// with g = (2p - 1) alpha.
inline double a_closed_form(double p, double alpha, std::int64_t n) {
    const double g = (2.0 * p - 1.0) * alpha;
    return std::exp(lgamma_ratio(static_cast<double>(n), g) - std::lgamma(1.0 + g));
}

struct LongDoubleSums {
    std::vector<long double> a;
    std::vector<long double> EX;
    std::vector<long double> ES;
    std::vector<long double> A2;
    std::vector<long double> B2;
};

/// Recomputes every normalizer recursion in long double with plain
/// accumulation; shares nothing with derw::compute_normalizers.
inline LongDoubleSums recompute_long_double(const derw::ModelParams& pr, std::int64_t n_max) {
    LongDoubleSums s;
    const auto size = static_cast<std::size_t>(n_max) + 1;
    s.a.assign(size, 1.0L);
    s.EX.assign(size, 0.0L);
    s.ES.assign(size, 0.0L);
    s.A2.assign(size, 0.0L);
    s.B2.assign(size, 0.0L);
    const long double gamma2p = 2.0L * static_cast<long double>(pr.p) - 1.0L;
    const long double a1 = derw::sequence_value(pr.alpha, 1);
    const long double b1 = derw::sequence_value(pr.beta, 1);
    s.EX[1] = a1 * (2.0L * static_cast<long double>(pr.q) - 1.0L) + (1.0L - a1) * (2.0L * b1 - 1.0L);
    s.ES[1] = s.EX[1];
    s.A2[1] = 1.0L - s.EX[1] * s.EX[1];
    s.B2[1] = 1.0L;
    for (std::int64_t n = 1; n < n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const long double an1 = derw::sequence_value(pr.alpha, n + 1);
        const long double bn1 = derw::sequence_value(pr.beta, n + 1);
        s.a[i + 1] = s.a[i] * (1.0L + gamma2p * an1 / static_cast<long double>(n));
        s.EX[i + 1] = an1 * gamma2p * s.ES[i] / static_cast<long double>(n) +
                      (1.0L - an1) * (2.0L * bn1 - 1.0L);
        s.ES[i + 1] = s.ES[i] + s.EX[i + 1];
        const long double inv2 = 1.0L / (s.a[i + 1] * s.a[i + 1]);
        s.A2[i + 1] = s.A2[i] + inv2 * (1.0L - s.EX[i + 1] * s.EX[i + 1]);
        s.B2[i + 1] = s.B2[i] + inv2;
    }
    return s;
}

/// Deterministic standard-normal draws (Box-Muller over a 64-bit LCG that
/// is nothing like the library's Philox).
inline std::vector<double> seeded_normals(std::uint64_t seed, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
    const auto next_u01 = [&]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    while (out.size() < count) {
        const double u1 = std::max(next_u01(), 0x1.0p-60);
        const double u2 = next_u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out.push_back(r * std::cos(2.0 * M_PI * u2));
        if (out.size() < count) out.push_back(r * std::sin(2.0 * M_PI * u2));
    }
    return out;
}

// Brute-force long double partial sums A2[1e8], produced by a one-off
// streaming run of the plain recursions (5 s); the estimate_A_inf interval
// must contain these.
inline constexpr double kBruteA2_1e8_strong = 3.532194196194494;   // p=.9 a=.8 q=.5 b=.7
inline constexpr double kBruteA2_1e8_kt = 2.106433004063335;       // p=1 a=[1,.8...] b=.75 q=.5
inline constexpr double kBruteA2_1e8_t3ii = 2.142861014548212;     // p=1 a=.8 b=.6 q=.5

}  // namespace oracles
