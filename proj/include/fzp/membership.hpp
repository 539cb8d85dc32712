#pragma once

#include <algorithm>
#include <cmath>

#include "fzp/error.hpp"

namespace fzp {

/// The three fuzzy sets covering the activation universe E = [0, r_max].
enum class FuzzySet : int { Small = 0, Medium = 1, Large = 2 };

/// Parameters of the V = 3 piecewise-linear membership functions:
/// a left shoulder ("small"), a triangle ("medium") and a right shoulder
/// ("large"). The shoulders saturate, so every mu_v is defined on all of
/// the reals even for values outside [0, r_max].
struct MembershipBank {
    static constexpr int kSetCount = 3;

    double r_max = 6.0;
    double c = 1.0, d = 3.0;           // small: 1 below c, falls to 0 at d
    double a = 1.5, m = 3.0, b = 4.5;  // medium: apex at m
    double r = 3.0, q = 4.5;           // large: 0 below r, saturates at q

    void validate() const;

    /// Numerically checks that max_v mu_v(x) > 0 on a `step`-spaced grid over
    /// [0, r_max]. Selection can fail inside pooling when this is false.
    bool covers_universe(double step = 1e-3) const;
};

/// Bank with the r_max = 6 parameter set, scaled linearly for other caps:
/// d = r_max/2, c = r_max/6, a = r_max/4, m = r_max/2, b = 3*r_max/4,
/// r = r_max/2, q = 3*r_max/4.
MembershipBank default_bank(double r_max);

inline double capped_relu(double x, double r_max) {
    return std::min(std::max(x, 0.0), r_max);
}

inline double mu_small(double x, const MembershipBank& bank) {
    if (x > bank.d) return 0.0;
    if (x >= bank.c) return (bank.d - x) / (bank.d - bank.c);
    return 1.0;
}

inline double mu_medium(double x, const MembershipBank& bank) {
    if (x <= bank.a || x >= bank.b) return 0.0;
    if (x <= bank.m) return (x - bank.a) / (bank.m - bank.a);
    return (bank.b - x) / (bank.b - bank.m);
}

inline double mu_large(double x, const MembershipBank& bank) {
    if (x < bank.r) return 0.0;
    if (x <= bank.q) return (x - bank.r) / (bank.q - bank.r);
    return 1.0;
}

inline double membership(int set, double x, const MembershipBank& bank) {
    switch (set) {
        case 0: return mu_small(x, bank);
        case 1: return mu_medium(x, bank);
        case 2: return mu_large(x, bank);
        default: throw ConfigError("fuzzy set index out of range");
    }
}

/// Piecewise-constant slope of mu_set at x. Breakpoints take the right-hand
/// slope so the value is deterministic everywhere.
inline double membership_slope(int set, double x, const MembershipBank& bank) {
    switch (set) {
        case 0:
            return (x >= bank.c && x < bank.d) ? -1.0 / (bank.d - bank.c) : 0.0;
        case 1:
            if (x >= bank.a && x < bank.m) return 1.0 / (bank.m - bank.a);
            if (x >= bank.m && x < bank.b) return -1.0 / (bank.b - bank.m);
            return 0.0;
        case 2:
            return (x >= bank.r && x < bank.q) ? 1.0 / (bank.q - bank.r) : 0.0;
        default: throw ConfigError("fuzzy set index out of range");
    }
}

} // namespace fzp
