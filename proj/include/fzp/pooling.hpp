#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fzp/membership.hpp"
#include "fzp/volume.hpp"

namespace fzp {

enum class PoolOperator : int { Fuzzy = 0, Max = 1, Avg = 2, RegP = 3 };

PoolOperator pool_operator_from_name(std::string_view name); // throws ConfigError
std::string_view pool_operator_name(PoolOperator op);

/// k x k matrix of membership degrees of one channel of a patch under one
/// fuzzy set. Degrees lie in [0, 1].
struct FuzzyPatch {
    int k = 0;
    std::vector<double> degrees; // row-major, k*k

    double at(int i, int j) const { return degrees[static_cast<size_t>(i) * k + j]; }
};

/// Membership degrees of patch channel n under all three sets.
std::array<FuzzyPatch, MembershipBank::kSetCount>
fuzzify_patch(const VolumePatch& patch, int channel, const MembershipBank& bank);

/// Degree sum over the window; the per-set selection score. Lies in [0, k^2].
double score_patch(const FuzzyPatch& fuzzy);

/// Index of the largest score; ties go to the smallest index.
/// Throws SelectionError when every score is zero.
int select_fuzzy(std::span<const double> scores);

/// Center-of-gravity defuzzification of patch channel n weighted by the
/// selected degrees. Throws SelectionError on a zero degree sum.
double defuzzify_cog(const VolumePatch& patch, int channel, const FuzzyPatch& selected);

/// Per-window state recorded by a forward pass and consumed by the matching
/// backward pass. Entries are indexed (channel, patch): channel * patch_count
/// + patch, patches row-major over the grid.
struct PoolCache {
    PoolOperator op = PoolOperator::Fuzzy;
    PoolWindowSpec spec;
    OutputGrid grid;
    int in_w = 0, in_h = 0, depth = 0;

    MembershipBank bank; // fuzzy only
    std::vector<uint8_t> selected_set; // fuzzy: winning set index
    std::vector<double> degrees;       // fuzzy: pi' per window cell, entry*k*k + cell
    std::vector<double> degree_sum;    // fuzzy: S = sum of pi', always > 0
    std::vector<double> pooled_value;  // fuzzy: p'

    std::vector<int32_t> winner_cell; // max/regp: routed cell, -1 = regp averaging
};

template <typename T>
struct PoolOutputT {
    VolumeT<T> pooled;
    PoolCache cache;
};

using PoolOutput = PoolOutputT<double>;

/// Fuzzy pooling forward pass: fuzzify each window, score the three sets,
/// select per channel, defuzzify by center of gravity.
template <typename T>
PoolOutputT<T> fuzzy_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec,
                                  const MembershipBank& bank);

/// Gradient of the fuzzy forward pass with the selected set held fixed per
/// window. With S the degree sum and p' the pooled value,
///   d p'/d p_u = (pi_u + mu'(p_u) * p_u) / S - p' * mu'(p_u) / S.
/// `stop_membership_grad` drops the mu' terms (degrees treated as constants).
/// Overlapping windows accumulate additively; padding gradients are dropped.
template <typename T>
VolumeT<T> fuzzy_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out,
                               const VolumeT<T>& input, bool stop_membership_grad = false);

/// Window maximum; ties keep the first cell in row-major order. Padding cells
/// participate with value 0.
template <typename T>
PoolOutputT<T> max_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec);

template <typename T>
VolumeT<T> max_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out);

/// Window mean over all k^2 cells (padding counts as 0).
template <typename T>
PoolOutputT<T> avg_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec);

template <typename T>
VolumeT<T> avg_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out);

/// RegP: each cell scores the number of other window cells within `tau` of
/// its value. If every top-scoring cell holds the same value that value is
/// the output; otherwise the window average is emitted.
template <typename T>
PoolOutputT<T> regp_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec, double tau);

template <typename T>
VolumeT<T> regp_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out);

/// Operator choice plus everything the operators need.
struct PoolConfig {
    PoolOperator op = PoolOperator::Fuzzy;
    PoolWindowSpec spec;
    MembershipBank bank = default_bank(6.0);
    double tau = 0.0;
    bool stop_membership_grad = false;
};

template <typename T>
PoolOutputT<T> pool_forward(const VolumeT<T>& input, const PoolConfig& config);

template <typename T>
VolumeT<T> pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out, const VolumeT<T>& input,
                         bool stop_membership_grad = false);

} // namespace fzp
