#pragma once

#include <cstdint>
#include <optional>

namespace idescope {

/// Discrete time interval, inclusive on both ends. An absent bound means the
/// interval is unbounded on that side. Times are 64-bit to keep long pullback
/// horizons exact.
struct DiscreteInterval {
    std::optional<std::int64_t> start;
    std::optional<std::int64_t> end;

    bool contains(std::int64_t t) const {
        if (start && t < *start) return false;
        if (end && t > *end) return false;
        return true;
    }

    /// True when the one-step map F_t is admissible, i.e. both t and t+1
    /// belong to the interval.
    bool step_admissible(std::int64_t t) const {
        return contains(t) && contains(t + 1);
    }

    static DiscreteInterval all() { return {}; }
    static DiscreteInterval from(std::int64_t t0) { return {t0, std::nullopt}; }
    static DiscreteInterval range(std::int64_t a, std::int64_t b) { return {a, b}; }
};

} // namespace idescope
