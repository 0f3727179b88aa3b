// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include "test_main_paths.h"

#include <voxup/error.h>
#include <voxup/rng.h>
#include <voxup/sparse_voxel.h>

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <unordered_set>

using namespace voxup;

namespace {

std::vector<Coord>
randomCoords(SplitMix64 &rng, std::size_t n, std::uint32_t r) {
    std::vector<Coord> out(n);
    for (Coord &c : out)
        c = {static_cast<std::uint16_t>(rng.below(r)), static_cast<std::uint16_t>(rng.below(r)),
             static_cast<std::uint16_t>(rng.below(r))};
    return out;
}

std::unordered_set<std::uint64_t>
keySet(std::span<const Coord> coords) {
    std::unordered_set<std::uint64_t> s;
    for (const Coord &c : coords)
        s.insert(packCoord(c));
    return s;
}

std::unordered_set<std::uint64_t>
keySet(const SparseVoxelGrid &g) {
    return keySet(g.coords());
}

ErrorCode
codeOf(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::IoError;
}

} // namespace

TEST(SparseVoxel, CanonicalizeSortsAndDedups) {
    const auto g = SparseVoxelGrid::canonicalize({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}, 2);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], (Coord{0, 0, 0}));
    EXPECT_EQ(g[1], (Coord{1, 0, 0}));
    EXPECT_TRUE(SparseVoxelGrid::canonicalize({}, 4).empty());
}

TEST(SparseVoxel, CanonicalizeMatchesSetOracle) {
    SplitMix64 rng(11);
    const auto coords = randomCoords(rng, 1000, 16);
    const auto g = SparseVoxelGrid::canonicalize(coords, 16);
    EXPECT_EQ(keySet(g), keySet(coords));
    EXPECT_TRUE(std::is_sorted(g.coords().begin(), g.coords().end()));
    EXPECT_EQ(std::adjacent_find(g.coords().begin(), g.coords().end()), g.coords().end());
}

TEST(SparseVoxel, LexicographicOrderIsXThenYThenZ) {
    const auto g = SparseVoxelGrid::canonicalize({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}, 2);
    EXPECT_EQ(g[0], (Coord{0, 0, 1}));
    EXPECT_EQ(g[1], (Coord{0, 1, 0}));
    EXPECT_EQ(g[2], (Coord{1, 0, 0}));
}

TEST(SparseVoxel, OutOfRangeRejected) {
    EXPECT_EQ(codeOf([] { SparseVoxelGrid::canonicalize({{2, 0, 0}}, 2); }), ErrorCode::OutOfRange);
    EXPECT_EQ(codeOf([] { SparseVoxelGrid::fromCanonical({{1, 0, 0}, {0, 0, 0}}, 2); }), ErrorCode::InvalidArgument);
    EXPECT_THROW(validateResolution(0), Error);
    EXPECT_THROW(validateResolution(kMaxResolution + 1), Error);
}

TEST(SparseVoxel, HashAlignHandExample) {
    const Coord a{0, 0, 0}, b{0, 0, 1}, c{1, 1, 1};
    const auto g = SparseVoxelGrid::canonicalize({a, b, c}, 2);
    const std::vector<Coord> target{c, a, b};
    const AlignmentPermutation pi = hashAlign(g, target);
    EXPECT_EQ(std::vector<std::size_t>(pi.mapping().begin(), pi.mapping().end()), (std::vector<std::size_t>{2, 0, 1}));
    EXPECT_EQ(hashAlign(g, g.coords()), AlignmentPermutation::identity(3));
}

TEST(SparseVoxel, ApplyPermutationHandExample) {
    const AlignmentPermutation pi({2, 0, 1});
    const VoxelMask m = applyPermutation(VoxelMask::hard({1, 0, 0}), pi);
    EXPECT_EQ(m, VoxelMask::hard({0, 1, 0}));
    EXPECT_EQ(applyPermutation(VoxelMask::hard({1, 0, 0}), AlignmentPermutation::identity(3)),
              VoxelMask::hard({1, 0, 0}));
}

TEST(SparseVoxel, PermutationValidation) {
    EXPECT_THROW(AlignmentPermutation({0, 0, 1}), Error);
    EXPECT_THROW(AlignmentPermutation({0, 3, 1}), Error);
    EXPECT_EQ(codeOf([] { applyPermutation(VoxelMask::hard({1, 0}), AlignmentPermutation::identity(3)); }),
              ErrorCode::SizeMismatch);
}

TEST(SparseVoxel, PermutationInverseProperty) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.below(300);
        std::vector<std::size_t> map(n);
        for (std::size_t i = 0; i < n; ++i)
            map[i] = i;
        for (std::size_t i = n; i > 1; --i)
            std::swap(map[i - 1], map[rng.below(i)]);
        std::vector<float> scores(n);
        for (float &s : scores)
            s = static_cast<float>(rng.nextDouble());
        const AlignmentPermutation p(map);
        const VoxelMask m = VoxelMask::soft(scores);
        EXPECT_EQ(applyPermutation(applyPermutation(m, p), p.inverse()), m);
        EXPECT_EQ(applyPermutation(applyPermutation(m, p.inverse()), p), m);
    }
}

TEST(SparseVoxel, HashAlignRoundTripLargeShuffle) {
    SplitMix64 rng(99);
    const auto g = SparseVoxelGrid::canonicalize(randomCoords(rng, 15000, 64), 64);
    ASSERT_GE(g.size(), 10000u);
    std::vector<Coord> order(g.coords().begin(), g.coords().end());
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    const AlignmentPermutation pi = hashAlign(g, order);
    for (std::size_t i = 0; i < order.size(); ++i)
        ASSERT_EQ(g[pi[i]], order[i]);
    EXPECT_EQ(applyPermutation(g.coords(), pi), order);
}

TEST(SparseVoxel, HashAlignRejectsMismatches) {
    const auto g = SparseVoxelGrid::canonicalize({{0, 0, 0}, {0, 0, 1}, {1, 1, 1}}, 2);
    EXPECT_EQ(codeOf([&] { hashAlign(g, std::vector<Coord>{{0, 0, 0}, {0, 0, 1}}); }), ErrorCode::AlignmentMismatch);
    EXPECT_EQ(codeOf([&] { hashAlign(g, std::vector<Coord>{{0, 0, 0}, {0, 0, 1}, {1, 0, 1}}); }),
              ErrorCode::AlignmentMismatch);
    EXPECT_EQ(codeOf([&] { hashAlign(g, std::vector<Coord>{{0, 0, 0}, {0, 0, 1}, {0, 0, 1}}); }),
              ErrorCode::AlignmentMismatch);
}

TEST(SparseVoxel, SetOpsHandExamples) {
    const auto a = SparseVoxelGrid::canonicalize({{0, 0, 0}}, 2);
    const auto b = SparseVoxelGrid::canonicalize({{0, 0, 0}, {1, 1, 1}}, 2);
    EXPECT_EQ(setIntersect(a, b), a);
    EXPECT_TRUE(containsAll(b, a));
    EXPECT_FALSE(containsAll(a, b));
    const auto c = SparseVoxelGrid::canonicalize({{1, 0, 0}}, 2);
    EXPECT_TRUE(setIntersect(a, c).empty());
    EXPECT_EQ(missingFrom(a, b), (std::vector<Coord>{{1, 1, 1}}));
    EXPECT_EQ(codeOf([&] { setUnion(a, SparseVoxelGrid::canonicalize({}, 4)); }), ErrorCode::ResolutionMismatch);
    EXPECT_EQ(codeOf([&] { containsAll(a, SparseVoxelGrid::canonicalize({}, 4)); }), ErrorCode::ResolutionMismatch);
}

TEST(SparseVoxel, SetOpsMatchHashSetOracle) {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        const auto ca = randomCoords(rng, 5000, 24), cb = randomCoords(rng, 5000, 24);
        const auto a = SparseVoxelGrid::canonicalize(ca, 24), b = SparseVoxelGrid::canonicalize(cb, 24);
        const auto sa = keySet(ca), sb = keySet(cb);
        std::unordered_set<std::uint64_t> inter, uni = sa, diff;
        for (auto k : sa)
            (sb.count(k) ? inter : diff).insert(k);
        uni.insert(sb.begin(), sb.end());
        EXPECT_EQ(keySet(setIntersect(a, b)), inter);
        EXPECT_EQ(keySet(setUnion(a, b)), uni);
        EXPECT_EQ(keySet(setDifference(a, b)), diff);
        EXPECT_EQ(setIntersect(a, b).size() + setDifference(a, b).size(), a.size());
        EXPECT_TRUE(containsAll(setUnion(a, b), a));
        EXPECT_EQ(containsAll(a, b), diff.size() == 0 && keySet(setDifference(b, a)).empty());
    }
}

TEST(SparseVoxel, MaskConstructors) {
    EXPECT_THROW(VoxelMask::hard({0, 2}), Error);
    EXPECT_THROW(VoxelMask::soft({0.5f, 1.5f}), Error);
    EXPECT_EQ(VoxelMask::hard({1, 0, 1, 1}).popcount(), 3u);
    EXPECT_FALSE(VoxelMask::filled(3, true).isSoft());
}

TEST(SparseVoxel, GridAndMaskFilesRoundTrip) {
    const auto dir = test::scratchDir("svox");
    SplitMix64 rng(3);
    const auto g = SparseVoxelGrid::canonicalize(randomCoords(rng, 777, 4096), 4096);
    saveGrid(g, dir / "g.svox");
    EXPECT_EQ(loadGrid(dir / "g.svox"), g);
    EXPECT_EQ(std::filesystem::file_size(dir / "g.svox"), 4 + 4 + 4 + 8 + 6 * g.size());

    const VoxelMask hard = VoxelMask::hard({1, 0, 1});
    const VoxelMask soft = VoxelMask::soft({0.25f, 0.5f, 1.0f});
    saveMask(hard, dir / "h.vmsk");
    saveMask(soft, dir / "s.vmsk");
    EXPECT_EQ(loadMask(dir / "h.vmsk"), hard);
    EXPECT_EQ(loadMask(dir / "s.vmsk"), soft);

    std::ifstream in(dir / "g.svox", std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "SVOX");
}

TEST(SparseVoxel, FileErrors) {
    const auto dir = test::scratchDir("svox_err");
    EXPECT_EQ(codeOf([&] { loadGrid(dir / "missing.svox"); }), ErrorCode::FileNotFound);
    std::ofstream(dir / "junk.svox") << "NOPE0000";
    EXPECT_EQ(codeOf([&] { loadGrid(dir / "junk.svox"); }), ErrorCode::ParseError);
    saveGrid(SparseVoxelGrid::canonicalize({{1, 2, 3}, {3, 2, 1}}, 4), dir / "t.svox");
    std::filesystem::resize_file(dir / "t.svox", 24);
    EXPECT_THROW(loadGrid(dir / "t.svox"), Error);
}
