// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace voxup {

/// Largest supported grid resolution; coordinates are stored as u16.
inline constexpr std::uint32_t kMaxResolution = 4096;

struct Coord {
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::uint16_t z = 0;

    /// Lexicographic (x, then y, then z): the canonical ordering.
    friend constexpr auto operator<=>(const Coord &, const Coord &) = default;
};

/// Packs a coordinate into one integer; the packing preserves canonical order.
constexpr std::uint64_t packCoord(const Coord &c) {
    return (std::uint64_t{c.x} << 32) | (std::uint64_t{c.y} << 16) | std::uint64_t{c.z};
}

/// Sparse set of active cells in an R^3 grid, held in canonical order.
///
/// Instances can only be created through canonicalize() or fromCanonical(),
/// so every grid satisfies: coordinates strictly increasing, no duplicates,
/// and every component < resolution.
class SparseVoxelGrid {
public:
    SparseVoxelGrid() = default;

    /// Sorts and deduplicates arbitrary coordinates. Throws OutOfRange if any
    /// component is >= resolution, InvalidArgument for a bad resolution.
    static SparseVoxelGrid canonicalize(std::vector<Coord> coords, std::uint32_t resolution);

    /// Adopts coordinates that are already canonical; validates that claim.
    static SparseVoxelGrid fromCanonical(std::vector<Coord> coords, std::uint32_t resolution);

    std::uint32_t resolution() const { return mResolution; }
    std::span<const Coord> coords() const { return mCoords; }
    std::size_t size() const { return mCoords.size(); }
    bool empty() const { return mCoords.empty(); }
    const Coord &operator[](std::size_t i) const { return mCoords[i]; }

    bool contains(const Coord &c) const;

    friend bool operator==(const SparseVoxelGrid &, const SparseVoxelGrid &) = default;

private:
    SparseVoxelGrid(std::vector<Coord> coords, std::uint32_t resolution)
        : mResolution(resolution), mCoords(std::move(coords)) {}

    std::uint32_t mResolution = 1;
    std::vector<Coord> mCoords;
};

void validateResolution(std::uint32_t resolution);

/// Per-voxel labels aligned with some coordinate ordering. Hard masks hold
/// {0,1}; soft masks hold scores in [0,1].
class VoxelMask {
public:
    VoxelMask() = default;

    static VoxelMask hard(std::vector<std::uint8_t> bits);
    static VoxelMask soft(std::vector<float> scores);
    static VoxelMask filled(std::size_t count, bool value);

    bool isSoft() const { return mSoft; }
    std::size_t size() const { return mValues.size(); }
    float operator[](std::size_t i) const { return mValues[i]; }
    std::span<const float> values() const { return mValues; }

    /// True entries of a hard mask (entries >= 0.5 for a soft one).
    std::size_t popcount() const;

    friend bool operator==(const VoxelMask &, const VoxelMask &) = default;

private:
    VoxelMask(std::vector<float> values, bool soft) : mValues(std::move(values)), mSoft(soft) {}

    std::vector<float> mValues;
    bool mSoft = false;
};

/// A bijection on [0, N).
class AlignmentPermutation {
public:
    AlignmentPermutation() = default;

    /// Throws InvalidArgument unless `mapping` is a permutation.
    explicit AlignmentPermutation(std::vector<std::size_t> mapping);

    static AlignmentPermutation identity(std::size_t n);

    std::size_t size() const { return mMapping.size(); }
    std::size_t operator[](std::size_t i) const { return mMapping[i]; }
    std::span<const std::size_t> mapping() const { return mMapping; }

    AlignmentPermutation inverse() const;

    friend bool operator==(const AlignmentPermutation &, const AlignmentPermutation &) = default;

private:
    std::vector<std::size_t> mMapping;
};

/// Builds pi with source[pi[i]] == targetOrder[i] using a coordinate hash
/// table. Throws AlignmentMismatch when the target is not exactly a
/// reordering of the source set.
AlignmentPermutation hashAlign(const SparseVoxelGrid &source, std::span<const Coord> targetOrder);

/// out[i] = mask[perm[i]].
VoxelMask applyPermutation(const VoxelMask &mask, const AlignmentPermutation &perm);

/// Reorders coordinates the same way applyPermutation reorders masks.
std::vector<Coord> applyPermutation(std::span<const Coord> coords, const AlignmentPermutation &perm);

SparseVoxelGrid setIntersect(const SparseVoxelGrid &a, const SparseVoxelGrid &b);
SparseVoxelGrid setUnion(const SparseVoxelGrid &a, const SparseVoxelGrid &b);
SparseVoxelGrid setDifference(const SparseVoxelGrid &a, const SparseVoxelGrid &b);

/// True when every coordinate of `subset` is in `superset`.
bool containsAll(const SparseVoxelGrid &superset, const SparseVoxelGrid &subset);

/// Coordinates of `subset` missing from `superset`, canonical order.
std::vector<Coord> missingFrom(const SparseVoxelGrid &superset, const SparseVoxelGrid &subset);

// "SVOX" v1: u32 resolution, u64 count, count x (u16,u16,u16). Little-endian.
void saveGrid(const SparseVoxelGrid &grid, const std::filesystem::path &path);
SparseVoxelGrid loadGrid(const std::filesystem::path &path);

// "VMSK" v1: u64 count, u8 kind (0 hard, 1 soft), then count u8 or count f32.
void saveMask(const VoxelMask &mask, const std::filesystem::path &path);
VoxelMask loadMask(const std::filesystem::path &path);

} // namespace voxup
