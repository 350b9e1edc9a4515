// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace derw {

/// Neumaier (improved Kahan) compensated accumulator.
///
/// All normalizer series in this project are accumulated through this type:
/// sums run to 10^6+ terms and are compared against closed forms at 1e-10,
/// which plain double accumulation does not reliably reach.
class CompensatedSum {
  public:
    CompensatedSum() = default;
    explicit CompensatedSum(double init) : sum_(init) {}

    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            comp_ += (sum_ - t) + value;
        } else {
            comp_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double value) {
        add(value);
        return *this;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace derw
