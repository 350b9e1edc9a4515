// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "derw/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "derw/errors.hpp"

namespace derw {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double rotation_value(const RotationSeq& r, std::int64_t n) {
    const double x = static_cast<double>(n) * r.theta;
    const double frac = x - std::floor(x);
    return r.lo + (r.hi - r.lo) * frac;
}

}  // namespace

void validate_sequence(const SequenceSpec& spec) {
    struct Visitor {
        void operator()(const ConstantSeq& s) const {
            if (!in_unit(s.value)) throw InvalidParameter("constant sequence value outside [0,1]");
        }
        void operator()(const ExplicitSeq& s) const {
            for (double v : s.head)
                if (!in_unit(v)) throw InvalidParameter("explicit sequence head value outside [0,1]");
            if (!in_unit(s.tail)) throw InvalidParameter("explicit sequence tail outside [0,1]");
        }
        void operator()(const PowerConvergentSeq& s) const {
            if (!(s.exponent > 0.0)) throw InvalidParameter("power sequence exponent must be > 0");
            if (!in_unit(s.limit)) throw InvalidParameter("power sequence limit outside [0,1]");
            if (!std::isfinite(s.amplitude)) throw InvalidParameter("power sequence amplitude not finite");
        }
        void operator()(const PeriodicSeq& s) const {
            if (s.values.empty()) throw InvalidParameter("periodic sequence needs at least one value");
            for (double v : s.values)
                if (!in_unit(v)) throw InvalidParameter("periodic sequence value outside [0,1]");
        }
        void operator()(const RotationSeq& s) const {
            if (!std::isfinite(s.theta)) throw InvalidParameter("rotation theta not finite");
            if (!in_unit(s.lo) || !in_unit(s.hi) || s.lo > s.hi)
                throw InvalidParameter("rotation needs 0 <= lo <= hi <= 1");
        }
    };
    std::visit(Visitor{}, spec);
}

double sequence_value(const SequenceSpec& spec, std::int64_t n) {
    struct Visitor {
        std::int64_t n;
        double operator()(const ConstantSeq& s) const { return s.value; }
        double operator()(const ExplicitSeq& s) const {
            const auto idx = static_cast<std::size_t>(n - 1);
            return idx < s.head.size() ? s.head[idx] : s.tail;
        }
        double operator()(const PowerConvergentSeq& s) const {
            return clamp01(s.limit + s.amplitude * std::pow(static_cast<double>(n), -s.exponent));
        }
        double operator()(const PeriodicSeq& s) const {
            const auto m = static_cast<std::int64_t>(s.values.size());
            return s.values[static_cast<std::size_t>((n - 1) % m)];
        }
        double operator()(const RotationSeq& s) const { return rotation_value(s, n); }
    };
    return std::visit(Visitor{n}, spec);
}

SeqLimits sequence_limits(const SequenceSpec& spec) {
    struct Visitor {
        SeqLimits operator()(const ConstantSeq& s) const { return {s.value, s.value}; }
        SeqLimits operator()(const ExplicitSeq& s) const { return {s.tail, s.tail}; }
        SeqLimits operator()(const PowerConvergentSeq& s) const { return {s.limit, s.limit}; }
        SeqLimits operator()(const PeriodicSeq& s) const {
            const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
            return {*lo, *hi};
        }
        SeqLimits operator()(const RotationSeq& s) const {
            if (!s.irrational)
                throw RationalRotationUnsupported(
                    "rotation limits are only defined for theta declared irrational");
            // Equidistribution of the irrational rotation: the orbit is dense
            // in [lo, hi].
            return {s.lo, s.hi};
        }
    };
    return std::visit(Visitor{}, spec);
}

double sequence_tail_inf(const SequenceSpec& spec, std::int64_t n) {
    struct Visitor {
        std::int64_t n;
        double operator()(const ConstantSeq& s) const { return s.value; }
        double operator()(const ExplicitSeq& s) const {
            double lo = s.tail;
            for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(n, 0));
                 i < s.head.size(); ++i)
                lo = std::min(lo, s.head[i]);
            return lo;
        }
        double operator()(const PowerConvergentSeq& s) const {
            if (s.amplitude >= 0.0) return s.limit;  // approached from above
            // Increasing toward the limit: the infimum over k > n is the next
            // term (clamped like sequence_value).
            return clamp01(s.limit + s.amplitude * std::pow(static_cast<double>(n + 1), -s.exponent));
        }
        double operator()(const PeriodicSeq& s) const {
            return *std::min_element(s.values.begin(), s.values.end());
        }
        double operator()(const RotationSeq& s) const {
            // Dense orbit: the infimum of any tail is lo.
            return s.lo;
        }
    };
    return std::visit(Visitor{n}, spec);
}

}  // namespace derw
