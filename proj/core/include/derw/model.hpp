// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "derw/sequence.hpp"

namespace derw {

/// Full parameterization of the dynamic elephant random walk.
///
/// p is the probability that a remembered step is repeated (vs. flipped), q
/// biases the very first step, alpha_n is the probability of taking a memory
/// step at time n, and beta_n biases the environment-driven step otherwise.
/// Both sequences are indexed from n = 1.
struct ModelParams {
    double p = 0.5;
    double q = 0.5;
    SequenceSpec alpha = ConstantSeq{1.0};
    SequenceSpec beta = ConstantSeq{0.5};
};

/// Throws InvalidParameter if p or q leaves [0,1] or a sequence is malformed.
void validate_params(const ModelParams& params);

/// Environment drift eps_n = 2*beta_n - 1.
double epsilon_of_beta(const ModelParams& params, std::int64_t n);

enum class Diffusivity { diffusive, critical, superdiffusive };
enum class ElephantStrength { weak, strong, indeterminate };
enum class Finiteness { finite, infinite, unknown };
enum class TheoremApplicability { cond_I, cond_II, no };

/// Phase classification and theorem-applicability flags, all derived from
/// exact comparisons of p against 3/4 and 1 and of the symbolic sequence
/// limits against the thresholds 1/(4p-2), 1 and (1-lsup(a))/(1-linf(a)).
/// Equalities at a threshold classify as indeterminate / not applicable.
struct RegimeReport {
    Diffusivity diffusivity = Diffusivity::diffusive;
    ElephantStrength elephant_strength = ElephantStrength::indeterminate;
    Finiteness b_inf_finite = Finiteness::unknown;
    TheoremApplicability thm1_applicable = TheoremApplicability::no;
    TheoremApplicability thm3_applicable = TheoremApplicability::no;
    bool variance_floor_expected = false;

    // The limits the flags were derived from, kept for reporting.
    SeqLimits alpha_limits{};
    SeqLimits beta_limits{};
};

RegimeReport classify_regime(const ModelParams& params);

const char* to_string(Diffusivity v);
const char* to_string(ElephantStrength v);
const char* to_string(Finiteness v);
const char* to_string(TheoremApplicability v);

}  // namespace derw
