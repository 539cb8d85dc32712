#include <doctest.h>

#include <algorithm>
#include <random>

#include "fzp/volume.hpp"
#include "test_util.hpp"

using namespace fzp;

TEST_CASE("output_dims matches the sliding-window count") {
    OutputGrid g = output_dims({.k = 2, .stride = 2}, 28, 28);
    CHECK(g.out_w == 14);
    CHECK(g.out_h == 14);
    CHECK(g.patch_count == 196);

    g = output_dims({.k = 3, .stride = 2, .pad_w = 1, .pad_h = 1}, 28, 28);
    CHECK(g.out_w == 14);
    CHECK(g.out_h == 14);
    CHECK(g.patch_count == 196);

    g = output_dims({.k = 2, .stride = 2}, 2, 2);
    CHECK(g.out_w == 1);
    CHECK(g.out_h == 1);
    CHECK(g.patch_count == 1);
}

TEST_CASE("output_dims rejects windows larger than the padded input") {
    CHECK_THROWS_AS(output_dims({.k = 5, .stride = 1}, 3, 3), ShapeError);
    CHECK_THROWS_AS(output_dims({.k = 5, .stride = 1, .pad_w = 1, .pad_h = 0}, 3, 6), ShapeError);
    CHECK_THROWS_AS(output_dims({.k = 0, .stride = 1}, 3, 3), ConfigError);
    CHECK_THROWS_AS(output_dims({.k = 2, .stride = 0}, 3, 3), ConfigError);
}

TEST_CASE("extract_patches enumerates row-major windows") {
    const Volume v = Volume::from_values(2, 2, 1, {1, 2, 3, 4});
    auto patches = extract_patches(v, {.k = 2, .stride = 2});
    REQUIRE(patches.size() == 1);
    CHECK(patches[0].values == std::vector<double>{1, 2, 3, 4});
    CHECK(patches[0].origin_row == 0);
    CHECK(patches[0].origin_col == 0);
}

TEST_CASE("stride equal to window side tiles the input exactly") {
    std::vector<double> vals(16);
    for (int i = 0; i < 16; ++i) vals[i] = i;
    const Volume v = Volume::from_values(4, 4, 1, vals);
    auto patches = extract_patches(v, {.k = 2, .stride = 2});
    REQUIRE(patches.size() == 4);
    CHECK(patches[0].values == std::vector<double>{0, 1, 4, 5});
    CHECK(patches[1].values == std::vector<double>{2, 3, 6, 7});
    CHECK(patches[2].values == std::vector<double>{8, 9, 12, 13});
    CHECK(patches[3].values == std::vector<double>{10, 11, 14, 15});
}

TEST_CASE("padding fills window cells with zeros") {
    std::vector<double> vals = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const Volume v = Volume::from_values(3, 3, 1, vals);
    auto patches = extract_patches(v, {.k = 3, .stride = 2, .pad_w = 1, .pad_h = 1});
    REQUIRE(patches.size() == 4);
    // Top-left window: first row and first column fall in the padding.
    CHECK(patches[0].values == std::vector<double>{0, 0, 0, 0, 1, 2, 0, 4, 5});
    CHECK(patches[3].values == std::vector<double>{5, 6, 0, 8, 9, 0, 0, 0, 0});
}

TEST_CASE("scatter_to_volume places pooled scalars on the grid") {
    const OutputGrid one{1, 1, 1};
    const std::vector<double> single{0.8};
    Volume v = scatter_to_volume<double>(single, one, 1);
    CHECK(v.width == 1);
    CHECK(v.values == std::vector<double>{0.8});

    // Maxima of the 4x4 tiling windows land as a 2x2 max-pooled map.
    const OutputGrid grid{2, 2, 4};
    const std::vector<double> maxima{5, 7, 13, 15};
    Volume pooled = scatter_to_volume<double>(maxima, grid, 1);
    CHECK(pooled.at(0, 0, 0) == 5);
    CHECK(pooled.at(0, 0, 1) == 7);
    CHECK(pooled.at(0, 1, 0) == 13);
    CHECK(pooled.at(0, 1, 1) == 15);

    const std::vector<double> wrong{1, 2, 3};
    CHECK_THROWS_AS(scatter_to_volume<double>(wrong, grid, 1), ShapeError);
}

TEST_CASE("patch count matches output_dims across a randomized sweep") {
    auto gen = testutil::rng(42);
    std::uniform_int_distribution<int> dim(1, 64), kk(1, 5), ss(1, 3), pp(0, 2);
    int tried = 0;
    while (tried < 200) {
        const int w = dim(gen), h = dim(gen);
        const PoolWindowSpec spec{kk(gen), ss(gen), pp(gen), pp(gen)};
        if (w + 2 * spec.pad_w < spec.k || h + 2 * spec.pad_h < spec.k) continue;
        ++tried;
        const Volume v = testutil::random_volume(gen, w, h, 1 + tried % 3, 0.0, 6.0);
        OutputGrid grid;
        auto patches = extract_patches(v, spec, &grid);
        CHECK(static_cast<long long>(patches.size()) == grid.patch_count);
        CHECK(grid.patch_count == output_dims(spec, w, h).patch_count);
    }
}

TEST_CASE("non-overlapping unpadded patches partition the input") {
    auto gen = testutil::rng(7);
    for (int k : {1, 2, 4}) {
        const int w = 8, h = 8, z = 2;
        const Volume v = testutil::random_volume(gen, w, h, z, 0.0, 6.0);
        auto patches = extract_patches(v, {.k = k, .stride = k});
        std::vector<double> seen;
        for (const auto& p : patches) seen.insert(seen.end(), p.values.begin(), p.values.end());
        REQUIRE(seen.size() == v.values.size());
        std::vector<double> a = seen, b = v.values;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("1x1 extract+scatter round-trips the volume bit-exactly") {
    auto gen = testutil::rng(3);
    const Volume v = testutil::random_volume(gen, 5, 4, 3, -2.0, 9.0);
    OutputGrid grid;
    auto patches = extract_patches(v, {.k = 1, .stride = 1}, &grid);
    std::vector<double> flat;
    flat.reserve(patches.size() * v.depth);
    for (const auto& p : patches)
        for (int n = 0; n < p.depth; ++n) flat.push_back(p.at(n, 0, 0));
    const Volume back = scatter_to_volume<double>(flat, grid, v.depth);
    CHECK(back.values == v.values);
    CHECK(back.same_shape(v));
}

TEST_CASE("volume constructors validate shapes") {
    CHECK_THROWS_AS(Volume(0, 2, 1), ShapeError);
    CHECK_THROWS_AS(Volume::from_values(2, 2, 1, {1, 2}), ShapeError);
}
