#pragma once

// Shared helpers for the test suites: seeded value generation and the
// central-finite-difference harness used by every gradient check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fzp/volume.hpp"

namespace testutil {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

/// Draws from [lo, hi] resampling until the value is at least `margin` away
/// from every entry of `breakpoints`.
inline double uniform_away_from(std::mt19937_64& gen, double lo, double hi,
                                const std::vector<double>& breakpoints, double margin) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double x = uniform(gen, lo, hi);
        bool ok = true;
        for (double bp : breakpoints)
            if (std::abs(x - bp) < margin) { ok = false; break; }
        if (ok) return x;
    }
    throw std::runtime_error("could not sample away from breakpoints");
}

inline fzp::Volume random_volume(std::mt19937_64& gen, int w, int h, int z, double lo, double hi) {
    fzp::Volume v(w, h, z);
    for (auto& x : v.values) x = uniform(gen, lo, hi);
    return v;
}

/// Central finite difference of a scalar functional.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Relative-error comparison with an absolute floor for near-zero gradients.
inline bool grad_close(double analytic, double numeric, double rel_tol, double abs_floor = 1e-7) {
    const double diff = std::abs(analytic - numeric);
    if (diff <= abs_floor) return true;
    return diff <= rel_tol * std::max(std::abs(analytic), std::abs(numeric));
}

struct GradCheckStats {
    int checked = 0;
    int failed = 0;
    double worst_rel = 0.0;
};

/// Compares an analytic gradient vector against central differences of `loss`
/// with respect to each coordinate of `params`.
inline GradCheckStats check_gradient(std::vector<double>& params,
                                     const std::function<double()>& loss,
                                     const std::vector<double>& analytic, double h, double rel_tol,
                                     double abs_floor = 1e-7) {
    GradCheckStats stats;
    for (size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = loss();
        params[i] = saved - h;
        const double down = loss();
        params[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        ++stats.checked;
        const double diff = std::abs(analytic[i] - numeric);
        const double scale = std::max(std::abs(analytic[i]), std::abs(numeric));
        if (diff > abs_floor && scale > 0.0) stats.worst_rel = std::max(stats.worst_rel, diff / scale);
        if (!grad_close(analytic[i], numeric, rel_tol, abs_floor)) ++stats.failed;
    }
    return stats;
}

} // namespace testutil
