#include "fzp/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fzp {

PoolOperator pool_operator_from_name(std::string_view name) {
    if (name == "fuzzy") return PoolOperator::Fuzzy;
    if (name == "max") return PoolOperator::Max;
    if (name == "avg") return PoolOperator::Avg;
    if (name == "regp") return PoolOperator::RegP;
    throw ConfigError("unknown pooling operator '" + std::string(name) +
                      "' (expected fuzzy|max|avg|regp)");
}

std::string_view pool_operator_name(PoolOperator op) {
    switch (op) {
        case PoolOperator::Fuzzy: return "fuzzy";
        case PoolOperator::Max: return "max";
        case PoolOperator::Avg: return "avg";
        case PoolOperator::RegP: return "regp";
    }
    throw ConfigError("invalid pooling operator tag");
}

std::array<FuzzyPatch, MembershipBank::kSetCount>
fuzzify_patch(const VolumePatch& patch, int channel, const MembershipBank& bank) {
    bank.validate();
    std::array<FuzzyPatch, MembershipBank::kSetCount> result;
    for (int v = 0; v < MembershipBank::kSetCount; ++v) {
        result[v].k = patch.k;
        result[v].degrees.resize(static_cast<size_t>(patch.k) * patch.k);
    }
    for (int i = 0; i < patch.k; ++i) {
        for (int j = 0; j < patch.k; ++j) {
            const double x = patch.at(channel, i, j);
            const size_t cell = static_cast<size_t>(i) * patch.k + j;
            result[0].degrees[cell] = mu_small(x, bank);
            result[1].degrees[cell] = mu_medium(x, bank);
            result[2].degrees[cell] = mu_large(x, bank);
        }
    }
    return result;
}

double score_patch(const FuzzyPatch& fuzzy) {
    double sum = 0.0;
    for (double degree : fuzzy.degrees) sum += degree;
    return sum;
}

int select_fuzzy(std::span<const double> scores) {
    if (scores.empty()) throw SelectionError("no scores to select from");
    int best = 0;
    for (int v = 1; v < static_cast<int>(scores.size()); ++v)
        if (scores[v] > scores[best]) best = v;
    if (!(scores[best] > 0.0))
        throw SelectionError("all fuzzy scores are zero; bank does not cover the window values");
    return best;
}

double defuzzify_cog(const VolumePatch& patch, int channel, const FuzzyPatch& selected) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < patch.k; ++i) {
        for (int j = 0; j < patch.k; ++j) {
            const double degree = selected.at(i, j);
            num += degree * patch.at(channel, i, j);
            den += degree;
        }
    }
    if (!(den > 0.0)) throw SelectionError("zero membership sum in defuzzification");
    return num / den;
}

namespace {

// Reads window cell (i, j) of the padded input; padding cells are 0.
template <typename T>
inline double window_value(const VolumeT<T>& input, int channel, int origin_row, int origin_col,
                           int i, int j, const PoolWindowSpec& spec) {
    const int ir = origin_row + i - spec.pad_h;
    const int ic = origin_col + j - spec.pad_w;
    if (ir < 0 || ir >= input.height || ic < 0 || ic >= input.width) return 0.0;
    return static_cast<double>(input.at(channel, ir, ic));
}

PoolCache make_cache(PoolOperator op, const PoolWindowSpec& spec, const OutputGrid& grid,
                     int in_w, int in_h, int depth) {
    PoolCache cache;
    cache.op = op;
    cache.spec = spec;
    cache.grid = grid;
    cache.in_w = in_w;
    cache.in_h = in_h;
    cache.depth = depth;
    return cache;
}

template <typename T>
void check_backward_shapes(const PoolCache& cache, const VolumeT<T>& grad_out) {
    if (grad_out.width != cache.grid.out_w || grad_out.height != cache.grid.out_h ||
        grad_out.depth != cache.depth)
        throw ShapeError("grad_out dims do not match the pooled output of this cache");
}

} // namespace

template <typename T>
PoolOutputT<T> fuzzy_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec,
                                  const MembershipBank& bank) {
    bank.validate();
    const OutputGrid grid = output_dims(spec, input.width, input.height);
    const int k = spec.k;
    const size_t cells = static_cast<size_t>(k) * k;
    const size_t entries = static_cast<size_t>(grid.patch_count) * input.depth;

    PoolOutputT<T> out;
    out.pooled = VolumeT<T>(grid.out_w, grid.out_h, input.depth);
    out.cache = make_cache(PoolOperator::Fuzzy, spec, grid, input.width, input.height, input.depth);
    out.cache.bank = bank;
    out.cache.selected_set.resize(entries);
    out.cache.degrees.resize(entries * cells);
    out.cache.degree_sum.resize(entries);
    out.cache.pooled_value.resize(entries);

    std::vector<double> vals(cells);
    std::vector<double> mem(cells * MembershipBank::kSetCount);
    for (int n = 0; n < input.depth; ++n) {
        for (int gr = 0; gr < grid.out_h; ++gr) {
            for (int gc = 0; gc < grid.out_w; ++gc) {
                double score[MembershipBank::kSetCount] = {0.0, 0.0, 0.0};
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < k; ++j) {
                        const size_t cell = static_cast<size_t>(i) * k + j;
                        const double x =
                            window_value(input, n, gr * spec.stride, gc * spec.stride, i, j, spec);
                        vals[cell] = x;
                        const double m0 = mu_small(x, bank);
                        const double m1 = mu_medium(x, bank);
                        const double m2 = mu_large(x, bank);
                        mem[cell * 3 + 0] = m0;
                        mem[cell * 3 + 1] = m1;
                        mem[cell * 3 + 2] = m2;
                        score[0] += m0;
                        score[1] += m1;
                        score[2] += m2;
                    }
                }
                int best = 0;
                if (score[1] > score[best]) best = 1;
                if (score[2] > score[best]) best = 2;
                const double sum = score[best];
                if (!(sum > 0.0))
                    throw SelectionError("all fuzzy scores are zero; bank does not cover the window");

                double num = 0.0;
                const size_t entry =
                    static_cast<size_t>(n) * grid.patch_count + static_cast<size_t>(gr) * grid.out_w + gc;
                double* cached_degrees = out.cache.degrees.data() + entry * cells;
                for (size_t cell = 0; cell < cells; ++cell) {
                    const double degree = mem[cell * 3 + best];
                    cached_degrees[cell] = degree;
                    num += degree * vals[cell];
                }
                const double pooled = num / sum;
                out.cache.selected_set[entry] = static_cast<uint8_t>(best);
                out.cache.degree_sum[entry] = sum;
                out.cache.pooled_value[entry] = pooled;
                out.pooled.at(n, gr, gc) = static_cast<T>(pooled);
            }
        }
    }
    return out;
}

template <typename T>
VolumeT<T> fuzzy_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out,
                               const VolumeT<T>& input, bool stop_membership_grad) {
    check_backward_shapes(cache, grad_out);
    if (input.width != cache.in_w || input.height != cache.in_h || input.depth != cache.depth)
        throw ShapeError("input dims do not match the forward pass of this cache");

    const PoolWindowSpec& spec = cache.spec;
    const int k = spec.k;
    const size_t cells = static_cast<size_t>(k) * k;
    VolumeT<T> grad_in(input.width, input.height, input.depth);

    for (int n = 0; n < cache.depth; ++n) {
        for (int gr = 0; gr < cache.grid.out_h; ++gr) {
            for (int gc = 0; gc < cache.grid.out_w; ++gc) {
                const double g = static_cast<double>(grad_out.at(n, gr, gc));
                if (g == 0.0) continue;
                const size_t entry = static_cast<size_t>(n) * cache.grid.patch_count +
                                     static_cast<size_t>(gr) * cache.grid.out_w + gc;
                const int best = cache.selected_set[entry];
                const double sum = cache.degree_sum[entry];
                const double pooled = cache.pooled_value[entry];
                const double* degrees = cache.degrees.data() + entry * cells;
                for (int i = 0; i < k; ++i) {
                    const int ir = gr * spec.stride + i - spec.pad_h;
                    if (ir < 0 || ir >= input.height) continue;
                    for (int j = 0; j < k; ++j) {
                        const int ic = gc * spec.stride + j - spec.pad_w;
                        if (ic < 0 || ic >= input.width) continue;
                        const size_t cell = static_cast<size_t>(i) * k + j;
                        double term = degrees[cell] / sum;
                        if (!stop_membership_grad) {
                            const double x = static_cast<double>(input.at(n, ir, ic));
                            const double slope = membership_slope(best, x, cache.bank);
                            term += slope * (x - pooled) / sum;
                        }
                        grad_in.at(n, ir, ic) += static_cast<T>(g * term);
                    }
                }
            }
        }
    }
    return grad_in;
}

template <typename T>
PoolOutputT<T> max_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec) {
    const OutputGrid grid = output_dims(spec, input.width, input.height);
    const int k = spec.k;

    PoolOutputT<T> out;
    out.pooled = VolumeT<T>(grid.out_w, grid.out_h, input.depth);
    out.cache = make_cache(PoolOperator::Max, spec, grid, input.width, input.height, input.depth);
    out.cache.winner_cell.resize(static_cast<size_t>(grid.patch_count) * input.depth);

    for (int n = 0; n < input.depth; ++n) {
        for (int gr = 0; gr < grid.out_h; ++gr) {
            for (int gc = 0; gc < grid.out_w; ++gc) {
                double best = -std::numeric_limits<double>::infinity();
                int best_cell = 0;
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < k; ++j) {
                        const double x =
                            window_value(input, n, gr * spec.stride, gc * spec.stride, i, j, spec);
                        if (x > best) {
                            best = x;
                            best_cell = i * k + j;
                        }
                    }
                }
                const size_t entry =
                    static_cast<size_t>(n) * grid.patch_count + static_cast<size_t>(gr) * grid.out_w + gc;
                out.cache.winner_cell[entry] = best_cell;
                out.pooled.at(n, gr, gc) = static_cast<T>(best);
            }
        }
    }
    return out;
}

template <typename T>
VolumeT<T> max_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out) {
    check_backward_shapes(cache, grad_out);
    const PoolWindowSpec& spec = cache.spec;
    VolumeT<T> grad_in(cache.in_w, cache.in_h, cache.depth);
    for (int n = 0; n < cache.depth; ++n) {
        for (int gr = 0; gr < cache.grid.out_h; ++gr) {
            for (int gc = 0; gc < cache.grid.out_w; ++gc) {
                const double g = static_cast<double>(grad_out.at(n, gr, gc));
                if (g == 0.0) continue;
                const size_t entry = static_cast<size_t>(n) * cache.grid.patch_count +
                                     static_cast<size_t>(gr) * cache.grid.out_w + gc;
                const int cell = cache.winner_cell[entry];
                const int ir = gr * spec.stride + cell / spec.k - spec.pad_h;
                const int ic = gc * spec.stride + cell % spec.k - spec.pad_w;
                if (ir < 0 || ir >= cache.in_h || ic < 0 || ic >= cache.in_w) continue;
                grad_in.at(n, ir, ic) += static_cast<T>(g);
            }
        }
    }
    return grad_in;
}

template <typename T>
PoolOutputT<T> avg_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec) {
    const OutputGrid grid = output_dims(spec, input.width, input.height);
    const int k = spec.k;
    const double inv_cells = 1.0 / (static_cast<double>(k) * k);

    PoolOutputT<T> out;
    out.pooled = VolumeT<T>(grid.out_w, grid.out_h, input.depth);
    out.cache = make_cache(PoolOperator::Avg, spec, grid, input.width, input.height, input.depth);

    for (int n = 0; n < input.depth; ++n) {
        for (int gr = 0; gr < grid.out_h; ++gr) {
            for (int gc = 0; gc < grid.out_w; ++gc) {
                double sum = 0.0;
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        sum += window_value(input, n, gr * spec.stride, gc * spec.stride, i, j, spec);
                out.pooled.at(n, gr, gc) = static_cast<T>(sum * inv_cells);
            }
        }
    }
    return out;
}

template <typename T>
VolumeT<T> avg_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out) {
    check_backward_shapes(cache, grad_out);
    const PoolWindowSpec& spec = cache.spec;
    const double inv_cells = 1.0 / (static_cast<double>(spec.k) * spec.k);
    VolumeT<T> grad_in(cache.in_w, cache.in_h, cache.depth);
    for (int n = 0; n < cache.depth; ++n) {
        for (int gr = 0; gr < cache.grid.out_h; ++gr) {
            for (int gc = 0; gc < cache.grid.out_w; ++gc) {
                const double g = static_cast<double>(grad_out.at(n, gr, gc)) * inv_cells;
                if (g == 0.0) continue;
                for (int i = 0; i < spec.k; ++i) {
                    const int ir = gr * spec.stride + i - spec.pad_h;
                    if (ir < 0 || ir >= cache.in_h) continue;
                    for (int j = 0; j < spec.k; ++j) {
                        const int ic = gc * spec.stride + j - spec.pad_w;
                        if (ic < 0 || ic >= cache.in_w) continue;
                        grad_in.at(n, ir, ic) += static_cast<T>(g);
                    }
                }
            }
        }
    }
    return grad_in;
}

template <typename T>
PoolOutputT<T> regp_pool_forward(const VolumeT<T>& input, const PoolWindowSpec& spec, double tau) {
    if (tau < 0.0) throw ConfigError("regp tolerance must be >= 0, got " + std::to_string(tau));
    const OutputGrid grid = output_dims(spec, input.width, input.height);
    const int k = spec.k;
    const size_t cells = static_cast<size_t>(k) * k;

    PoolOutputT<T> out;
    out.pooled = VolumeT<T>(grid.out_w, grid.out_h, input.depth);
    out.cache = make_cache(PoolOperator::RegP, spec, grid, input.width, input.height, input.depth);
    out.cache.winner_cell.resize(static_cast<size_t>(grid.patch_count) * input.depth);

    std::vector<double> vals(cells);
    std::vector<int> scores(cells);
    for (int n = 0; n < input.depth; ++n) {
        for (int gr = 0; gr < grid.out_h; ++gr) {
            for (int gc = 0; gc < grid.out_w; ++gc) {
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        vals[static_cast<size_t>(i) * k + j] =
                            window_value(input, n, gr * spec.stride, gc * spec.stride, i, j, spec);

                int best_score = -1;
                for (size_t u = 0; u < cells; ++u) {
                    int count = 0;
                    for (size_t w = 0; w < cells; ++w)
                        if (w != u && std::abs(vals[u] - vals[w]) <= tau) ++count;
                    scores[u] = count;
                    if (count > best_score) best_score = count;
                }

                // Winner only when every top-scoring cell holds the same value;
                // otherwise the case is ambiguous and the window average is used.
                int winner = -1;
                bool unique_value = true;
                for (size_t u = 0; u < cells && unique_value; ++u) {
                    if (scores[u] != best_score) continue;
                    if (winner < 0)
                        winner = static_cast<int>(u);
                    else if (vals[u] != vals[static_cast<size_t>(winner)])
                        unique_value = false;
                }

                double pooled;
                if (unique_value) {
                    pooled = vals[static_cast<size_t>(winner)];
                } else {
                    winner = -1;
                    double sum = 0.0;
                    for (double x : vals) sum += x;
                    pooled = sum / static_cast<double>(cells);
                }
                const size_t entry =
                    static_cast<size_t>(n) * grid.patch_count + static_cast<size_t>(gr) * grid.out_w + gc;
                out.cache.winner_cell[entry] = winner;
                out.pooled.at(n, gr, gc) = static_cast<T>(pooled);
            }
        }
    }
    return out;
}

template <typename T>
VolumeT<T> regp_pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out) {
    check_backward_shapes(cache, grad_out);
    const PoolWindowSpec& spec = cache.spec;
    const double inv_cells = 1.0 / (static_cast<double>(spec.k) * spec.k);
    VolumeT<T> grad_in(cache.in_w, cache.in_h, cache.depth);
    for (int n = 0; n < cache.depth; ++n) {
        for (int gr = 0; gr < cache.grid.out_h; ++gr) {
            for (int gc = 0; gc < cache.grid.out_w; ++gc) {
                const double g = static_cast<double>(grad_out.at(n, gr, gc));
                if (g == 0.0) continue;
                const size_t entry = static_cast<size_t>(n) * cache.grid.patch_count +
                                     static_cast<size_t>(gr) * cache.grid.out_w + gc;
                const int cell = cache.winner_cell[entry];
                if (cell >= 0) {
                    const int ir = gr * spec.stride + cell / spec.k - spec.pad_h;
                    const int ic = gc * spec.stride + cell % spec.k - spec.pad_w;
                    if (ir < 0 || ir >= cache.in_h || ic < 0 || ic >= cache.in_w) continue;
                    grad_in.at(n, ir, ic) += static_cast<T>(g);
                } else {
                    for (int i = 0; i < spec.k; ++i) {
                        const int ir = gr * spec.stride + i - spec.pad_h;
                        if (ir < 0 || ir >= cache.in_h) continue;
                        for (int j = 0; j < spec.k; ++j) {
                            const int ic = gc * spec.stride + j - spec.pad_w;
                            if (ic < 0 || ic >= cache.in_w) continue;
                            grad_in.at(n, ir, ic) += static_cast<T>(g * inv_cells);
                        }
                    }
                }
            }
        }
    }
    return grad_in;
}

template <typename T>
PoolOutputT<T> pool_forward(const VolumeT<T>& input, const PoolConfig& config) {
    switch (config.op) {
        case PoolOperator::Fuzzy: return fuzzy_pool_forward(input, config.spec, config.bank);
        case PoolOperator::Max: return max_pool_forward(input, config.spec);
        case PoolOperator::Avg: return avg_pool_forward(input, config.spec);
        case PoolOperator::RegP: return regp_pool_forward(input, config.spec, config.tau);
    }
    throw ConfigError("invalid pooling operator tag");
}

template <typename T>
VolumeT<T> pool_backward(const PoolCache& cache, const VolumeT<T>& grad_out, const VolumeT<T>& input,
                         bool stop_membership_grad) {
    switch (cache.op) {
        case PoolOperator::Fuzzy:
            return fuzzy_pool_backward(cache, grad_out, input, stop_membership_grad);
        case PoolOperator::Max: return max_pool_backward(cache, grad_out);
        case PoolOperator::Avg: return avg_pool_backward(cache, grad_out);
        case PoolOperator::RegP: return regp_pool_backward(cache, grad_out);
    }
    throw ConfigError("invalid pooling operator tag");
}

#define FZP_INSTANTIATE_POOLING(T)                                                                   \
    template PoolOutputT<T> fuzzy_pool_forward<T>(const VolumeT<T>&, const PoolWindowSpec&,          \
                                                  const MembershipBank&);                            \
    template VolumeT<T> fuzzy_pool_backward<T>(const PoolCache&, const VolumeT<T>&,                  \
                                               const VolumeT<T>&, bool);                             \
    template PoolOutputT<T> max_pool_forward<T>(const VolumeT<T>&, const PoolWindowSpec&);           \
    template VolumeT<T> max_pool_backward<T>(const PoolCache&, const VolumeT<T>&);                   \
    template PoolOutputT<T> avg_pool_forward<T>(const VolumeT<T>&, const PoolWindowSpec&);           \
    template VolumeT<T> avg_pool_backward<T>(const PoolCache&, const VolumeT<T>&);                   \
    template PoolOutputT<T> regp_pool_forward<T>(const VolumeT<T>&, const PoolWindowSpec&, double);  \
    template VolumeT<T> regp_pool_backward<T>(const PoolCache&, const VolumeT<T>&);                  \
    template PoolOutputT<T> pool_forward<T>(const VolumeT<T>&, const PoolConfig&);                   \
    template VolumeT<T> pool_backward<T>(const PoolCache&, const VolumeT<T>&, const VolumeT<T>&, bool);

FZP_INSTANTIATE_POOLING(double)
FZP_INSTANTIATE_POOLING(float)

#undef FZP_INSTANTIATE_POOLING

} // namespace fzp
