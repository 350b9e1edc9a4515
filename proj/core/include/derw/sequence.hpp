// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace derw {

// A deterministic [0,1]-valued sequence, indexed from n = 1. These feed the
// alpha (memory weight) and beta (environment bias) coefficients of the walk.
// Each variant knows its liminf/limsup symbolically; limits are never
// obtained by scanning values.

/// alpha_n = value for every n.
struct ConstantSeq {
    double value = 0.0;
};

/// Finite head, then a constant tail for all later indices.
struct ExplicitSeq {
    std::vector<double> head;
    double tail = 0.0;
};

/// clamp(limit + amplitude * n^(-exponent), 0, 1); exponent > 0.
struct PowerConvergentSeq {
    double limit = 0.0;
    double amplitude = 0.0;
    double exponent = 1.0;
};

/// Cycles through a nonempty list of values.
struct PeriodicSeq {
    std::vector<double> values;
};

/// lo + (hi - lo) * frac(n * theta): the orbit observable of the circle
/// rotation. Whether theta is irrational cannot be decided numerically, so
/// the caller asserts it; limits are only defined for irrational theta.
struct RotationSeq {
    double theta = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    bool irrational = false;
};

using SequenceSpec =
    std::variant<ConstantSeq, ExplicitSeq, PowerConvergentSeq, PeriodicSeq, RotationSeq>;

struct SeqLimits {
    double liminf = 0.0;
    double limsup = 0.0;
};

/// Throws InvalidParameter unless every value the spec can produce is in [0,1]
/// (and exponent > 0, periodic list nonempty, lo <= hi).
void validate_sequence(const SequenceSpec& spec);

/// Value at index n >= 1. Pure; clamping keeps PowerConvergent in range.
double sequence_value(const SequenceSpec& spec, std::int64_t n);

/// Symbolic liminf/limsup. Throws RationalRotationUnsupported for a rotation
/// not flagged irrational.
SeqLimits sequence_limits(const SequenceSpec& spec);

/// Exact inf_{k > n} of value(k), used for the certified A_inf^2 tail bound.
double sequence_tail_inf(const SequenceSpec& spec, std::int64_t n);

}  // namespace derw
