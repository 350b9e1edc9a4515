// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace derw {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A model/sequence/run parameter is out of its admissible range.
struct InvalidParameter : Error {
    using Error::Error;
};

/// Limits of a rotation sequence require the angle to be declared irrational.
struct RationalRotationUnsupported : Error {
    using Error::Error;
};

/// The a_n product hit an exact zero factor (p = 0 with alpha_2 = 1).
struct DegenerateNormalizer : Error {
    using Error::Error;
};

/// B_inf^2 = inf: the A_inf^2 tail is not summable (Lemma-10 infinite case).
struct NotSummable : Error {
    using Error::Error;
};

/// estimate_A_inf hit its iteration cap before reaching the tolerance.
struct BudgetExceeded : Error {
    using Error::Error;
};

/// A CLT/LIL scale is zero or smaller than its own certified uncertainty.
struct ScaleDegenerate : Error {
    using Error::Error;
};

/// The LIL envelope is undefined at this checkpoint (log|log t| guard).
struct EnvelopeUndefined : Error {
    using Error::Error;
};

/// Simulation asked for steps beyond the range the Normalizers cover.
struct NormalizerTooShort : Error {
    using Error::Error;
};

/// exact_distribution asked for n beyond the configured O(n^2) cap.
struct CapExceeded : Error {
    using Error::Error;
};

/// A statistical test got fewer samples than its minimum.
struct TooFewSamples : Error {
    using Error::Error;
};

/// Every checkpoint of a LIL window was excluded.
struct WindowEmpty : Error {
    using Error::Error;
};

}  // namespace derw
