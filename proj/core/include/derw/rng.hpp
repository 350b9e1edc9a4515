// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace derw {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). Every
// 128-bit block is a pure function of (key, counter), so any draw of the
// simulation can be addressed directly as (master_seed; path, step, role)
// with no sequential state — this is what makes ensembles bitwise
// reproducible under any worker count.

namespace philox {

inline constexpr std::uint32_t kW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline Block block(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t prod0 = static_cast<std::uint64_t>(kM4x32A) * ctr[0];
        const std::uint64_t prod1 = static_cast<std::uint64_t>(kM4x32B) * ctr[2];
        const Block next = {
            static_cast<std::uint32_t>(prod1 >> 32) ^ ctr[1] ^ key[0],
            static_cast<std::uint32_t>(prod1),
            static_cast<std::uint32_t>(prod0 >> 32) ^ ctr[3] ^ key[1],
            static_cast<std::uint32_t>(prod0),
        };
        ctr = next;
        key[0] += kW32A;
        key[1] += kW32B;
    }
    return ctr;
}

}  // namespace philox

/// Uniform draws addressed by (path, step, role) under one master seed.
///
/// Roles keep the independent coin streams of one step apart: the
/// state-only sampler uses role 0; the memory sampler uses role 0 for the
/// delta coin, 1 for the uniform past index, 2 for the repeat/flip coin and
/// 3 for the environment coin.
class StreamRng {
  public:
    explicit StreamRng(std::uint64_t master_seed, std::uint64_t path_index)
        : key_{static_cast<std::uint32_t>(master_seed),
               static_cast<std::uint32_t>(master_seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path_index)),
          path_hi_(static_cast<std::uint32_t>(path_index >> 32)) {}

    /// Uniform double in [0, 1) with 53 random bits. Steps are confined to
    /// 32 bits (simulations validate n_max well below that).
    double uniform(std::uint64_t step, std::uint32_t role) const {
        const philox::Block out = philox::block(
            {static_cast<std::uint32_t>(step), role, path_lo_, path_hi_}, key_);
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

  private:
    philox::Key key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
};

}  // namespace derw
