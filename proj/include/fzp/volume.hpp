#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fzp/error.hpp"

namespace fzp {

/// Dense stack of z feature maps of size w x h.
/// Values are stored row-major in (channel, row, col) order:
/// index = (channel * height + row) * width + col.
template <typename T>
struct VolumeT {
    int width = 0;
    int height = 0;
    int depth = 0;
    std::vector<T> values;

    VolumeT() = default;

    VolumeT(int w, int h, int z, T fill = T{})
        : width(w), height(h), depth(z) {
        if (w < 1 || h < 1 || z < 1)
            throw ShapeError("volume dimensions must be positive, got " + std::to_string(w) + "x" +
                             std::to_string(h) + "x" + std::to_string(z));
        values.assign(static_cast<size_t>(w) * h * z, fill);
    }

    static VolumeT from_values(int w, int h, int z, std::vector<T> vals) {
        VolumeT v(w, h, z);
        if (vals.size() != v.values.size())
            throw ShapeError("volume value count " + std::to_string(vals.size()) + " does not match " +
                             std::to_string(w) + "x" + std::to_string(h) + "x" + std::to_string(z));
        v.values = std::move(vals);
        return v;
    }

    size_t index(int n, int r, int c) const {
        return (static_cast<size_t>(n) * height + r) * width + c;
    }
    T at(int n, int r, int c) const { return values[index(n, r, c)]; }
    T& at(int n, int r, int c) { return values[index(n, r, c)]; }

    /// Pointer to the first value of channel n (a contiguous w*h block).
    const T* channel(int n) const { return values.data() + static_cast<size_t>(n) * width * height; }
    T* channel(int n) { return values.data() + static_cast<size_t>(n) * width * height; }

    size_t size() const { return values.size(); }

    bool same_shape(const VolumeT& o) const {
        return width == o.width && height == o.height && depth == o.depth;
    }
};

using Volume = VolumeT<double>;
using VolumeF = VolumeT<float>;

/// Pooling window geometry: k x k window, stride, zero padding per side.
struct PoolWindowSpec {
    int k = 2;
    int stride = 2;
    int pad_w = 0;
    int pad_h = 0;

    void validate() const {
        if (k < 1) throw ConfigError("pool window side must be >= 1, got " + std::to_string(k));
        if (stride < 1) throw ConfigError("pool stride must be >= 1, got " + std::to_string(stride));
        if (pad_w < 0 || pad_h < 0)
            throw ConfigError("pool padding must be >= 0, got " + std::to_string(pad_w) + "," +
                              std::to_string(pad_h));
    }
};

/// Output grid of a pooling pass over one feature map.
struct OutputGrid {
    int out_w = 0;
    int out_h = 0;
    long long patch_count = 0;
};

/// Sliding-window output size: floor((dim + 2*pad - k) / stride) + 1 per axis.
inline OutputGrid output_dims(const PoolWindowSpec& spec, int w, int h) {
    spec.validate();
    if (w < 1 || h < 1)
        throw ShapeError("input dimensions must be positive, got " + std::to_string(w) + "x" +
                         std::to_string(h));
    const int padded_w = w + 2 * spec.pad_w;
    const int padded_h = h + 2 * spec.pad_h;
    if (padded_w < spec.k || padded_h < spec.k)
        throw ShapeError("window " + std::to_string(spec.k) + " exceeds padded input " +
                         std::to_string(padded_w) + "x" + std::to_string(padded_h));
    OutputGrid grid;
    grid.out_w = (padded_w - spec.k) / spec.stride + 1;
    grid.out_h = (padded_h - spec.k) / spec.stride + 1;
    grid.patch_count = static_cast<long long>(grid.out_w) * grid.out_h;
    return grid;
}

/// One k x k x z window copied out of a volume. `origin_row`/`origin_col` are
/// the window's top-left corner in padded input coordinates. Values follow the
/// volume layout (channel, row, col); cells that fall in the padding are 0.
template <typename T>
struct VolumePatchT {
    int k = 0;
    int depth = 0;
    int origin_row = 0;
    int origin_col = 0;
    std::vector<T> values;

    T at(int n, int i, int j) const { return values[(static_cast<size_t>(n) * k + i) * k + j]; }
    T& at(int n, int i, int j) { return values[(static_cast<size_t>(n) * k + i) * k + j]; }
};

using VolumePatch = VolumePatchT<double>;

/// Enumerates pooling windows row-major over the output grid. The patch at
/// grid position (r, c) starts at padded coordinates (r*stride, c*stride).
template <typename T>
std::vector<VolumePatchT<T>> extract_patches(const VolumeT<T>& v, const PoolWindowSpec& spec,
                                             OutputGrid* grid_out = nullptr) {
    const OutputGrid grid = output_dims(spec, v.width, v.height);
    if (grid_out) *grid_out = grid;

    std::vector<VolumePatchT<T>> patches;
    patches.reserve(static_cast<size_t>(grid.patch_count));
    for (int gr = 0; gr < grid.out_h; ++gr) {
        for (int gc = 0; gc < grid.out_w; ++gc) {
            VolumePatchT<T> patch;
            patch.k = spec.k;
            patch.depth = v.depth;
            patch.origin_row = gr * spec.stride;
            patch.origin_col = gc * spec.stride;
            patch.values.assign(static_cast<size_t>(spec.k) * spec.k * v.depth, T{});
            for (int n = 0; n < v.depth; ++n) {
                for (int i = 0; i < spec.k; ++i) {
                    const int ir = patch.origin_row + i - spec.pad_h;
                    if (ir < 0 || ir >= v.height) continue;
                    for (int j = 0; j < spec.k; ++j) {
                        const int ic = patch.origin_col + j - spec.pad_w;
                        if (ic < 0 || ic >= v.width) continue;
                        patch.at(n, i, j) = v.at(n, ir, ic);
                    }
                }
            }
            patches.push_back(std::move(patch));
        }
    }
    return patches;
}

/// Assembles per-patch pooled scalars into the output volume. `values` is
/// indexed [patch][channel], patches row-major over the grid.
template <typename T>
VolumeT<T> scatter_to_volume(std::span<const T> values, const OutputGrid& grid, int z) {
    if (z < 1) throw ShapeError("channel count must be positive, got " + std::to_string(z));
    if (static_cast<long long>(values.size()) != grid.patch_count * z)
        throw ShapeError("scatter expects " + std::to_string(grid.patch_count * z) + " values, got " +
                         std::to_string(values.size()));
    VolumeT<T> out(grid.out_w, grid.out_h, z);
    for (long long p = 0; p < grid.patch_count; ++p) {
        const int r = static_cast<int>(p / grid.out_w);
        const int c = static_cast<int>(p % grid.out_w);
        for (int n = 0; n < z; ++n) out.at(n, r, c) = values[static_cast<size_t>(p) * z + n];
    }
    return out;
}

} // namespace fzp
