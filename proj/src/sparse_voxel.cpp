// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/sparse_voxel.h>

#include "binary_io.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>
#include <unordered_map>

namespace voxup {

namespace {

std::string
describe(const Coord &c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

void
checkInRange(const Coord &c, std::uint32_t resolution) {
    if (c.x >= resolution || c.y >= resolution || c.z >= resolution)
        throw Error(ErrorCode::OutOfRange,
                    "coordinate " + describe(c) + " outside grid of resolution " + std::to_string(resolution));
}

void
checkSameResolution(const SparseVoxelGrid &a, const SparseVoxelGrid &b) {
    if (a.resolution() != b.resolution())
        throw Error(ErrorCode::ResolutionMismatch, "resolution mismatch: " + std::to_string(a.resolution()) +
                                                       " vs " + std::to_string(b.resolution()));
}

} // namespace

void
validateResolution(std::uint32_t resolution) {
    if (resolution < 1 || resolution > kMaxResolution)
        throw Error(ErrorCode::InvalidArgument, "resolution " + std::to_string(resolution) + " not in [1, " +
                                                    std::to_string(kMaxResolution) + "]");
}

SparseVoxelGrid
SparseVoxelGrid::canonicalize(std::vector<Coord> coords, std::uint32_t resolution) {
    validateResolution(resolution);
    for (const Coord &c : coords)
        checkInRange(c, resolution);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    return SparseVoxelGrid(std::move(coords), resolution);
}

SparseVoxelGrid
SparseVoxelGrid::fromCanonical(std::vector<Coord> coords, std::uint32_t resolution) {
    validateResolution(resolution);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        checkInRange(coords[i], resolution);
        if (i > 0 && !(coords[i - 1] < coords[i]))
            throw Error(ErrorCode::InvalidArgument,
                        "coordinates not strictly increasing at index " + std::to_string(i));
    }
    return SparseVoxelGrid(std::move(coords), resolution);
}

bool
SparseVoxelGrid::contains(const Coord &c) const {
    return std::binary_search(mCoords.begin(), mCoords.end(), c);
}

VoxelMask
VoxelMask::hard(std::vector<std::uint8_t> bits) {
    std::vector<float> values(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1)
            throw Error(ErrorCode::InvalidArgument, "hard mask value at " + std::to_string(i) + " is not 0/1");
        values[i] = static_cast<float>(bits[i]);
    }
    return VoxelMask(std::move(values), false);
}

VoxelMask
VoxelMask::soft(std::vector<float> scores) {
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (!(scores[i] >= 0.0f && scores[i] <= 1.0f))
            throw Error(ErrorCode::InvalidArgument, "soft mask score at " + std::to_string(i) + " not in [0,1]");
    return VoxelMask(std::move(scores), true);
}

VoxelMask
VoxelMask::filled(std::size_t count, bool value) {
    return VoxelMask(std::vector<float>(count, value ? 1.0f : 0.0f), false);
}

std::size_t
VoxelMask::popcount() const {
    return static_cast<std::size_t>(
        std::count_if(mValues.begin(), mValues.end(), [](float v) { return v >= 0.5f; }));
}

AlignmentPermutation::AlignmentPermutation(std::vector<std::size_t> mapping) : mMapping(std::move(mapping)) {
    std::vector<bool> seen(mMapping.size(), false);
    for (std::size_t i = 0; i < mMapping.size(); ++i) {
        const std::size_t j = mMapping[i];
        if (j >= mMapping.size() || seen[j])
            throw Error(ErrorCode::InvalidArgument, "mapping is not a permutation (entry " + std::to_string(i) + ")");
        seen[j] = true;
    }
}

AlignmentPermutation
AlignmentPermutation::identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = i;
    return AlignmentPermutation(std::move(m));
}

AlignmentPermutation
AlignmentPermutation::inverse() const {
    std::vector<std::size_t> inv(mMapping.size());
    for (std::size_t i = 0; i < mMapping.size(); ++i)
        inv[mMapping[i]] = i;
    AlignmentPermutation out;
    out.mMapping = std::move(inv);
    return out;
}

AlignmentPermutation
hashAlign(const SparseVoxelGrid &source, std::span<const Coord> targetOrder) {
    if (targetOrder.size() != source.size())
        throw Error(ErrorCode::AlignmentMismatch, "alignment size mismatch: source has " +
                                                      std::to_string(source.size()) + " voxels, target " +
                                                      std::to_string(targetOrder.size()));
    std::unordered_map<std::uint64_t, std::size_t> index;
    index.reserve(source.size());
    for (std::size_t i = 0; i < source.size(); ++i)
        index.emplace(packCoord(source[i]), i);

    std::vector<std::size_t> mapping(targetOrder.size());
    std::vector<bool> used(source.size(), false);
    for (std::size_t i = 0; i < targetOrder.size(); ++i) {
        const auto it = index.find(packCoord(targetOrder[i]));
        if (it == index.end())
            throw Error(ErrorCode::AlignmentMismatch,
                        "target coordinate " + describe(targetOrder[i]) + " absent from source");
        if (used[it->second])
            throw Error(ErrorCode::AlignmentMismatch,
                        "target coordinate " + describe(targetOrder[i]) + " appears more than once");
        used[it->second] = true;
        mapping[i] = it->second;
    }
    return AlignmentPermutation(std::move(mapping));
}

VoxelMask
applyPermutation(const VoxelMask &mask, const AlignmentPermutation &perm) {
    if (mask.size() != perm.size())
        throw Error(ErrorCode::SizeMismatch, "mask length " + std::to_string(mask.size()) +
                                                 " does not match permutation length " + std::to_string(perm.size()));
    std::vector<float> out(mask.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mask[perm[i]];
    if (mask.isSoft())
        return VoxelMask::soft(std::move(out));
    std::vector<std::uint8_t> bits(out.size());
    std::transform(out.begin(), out.end(), bits.begin(), [](float v) { return static_cast<std::uint8_t>(v); });
    return VoxelMask::hard(std::move(bits));
}

std::vector<Coord>
applyPermutation(std::span<const Coord> coords, const AlignmentPermutation &perm) {
    if (coords.size() != perm.size())
        throw Error(ErrorCode::SizeMismatch, "coordinate count does not match permutation length");
    std::vector<Coord> out(coords.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = coords[perm[i]];
    return out;
}

SparseVoxelGrid
setIntersect(const SparseVoxelGrid &a, const SparseVoxelGrid &b) {
    checkSameResolution(a, b);
    std::vector<Coord> out;
    std::set_intersection(a.coords().begin(), a.coords().end(), b.coords().begin(), b.coords().end(),
                          std::back_inserter(out));
    return SparseVoxelGrid::fromCanonical(std::move(out), a.resolution());
}

SparseVoxelGrid
setUnion(const SparseVoxelGrid &a, const SparseVoxelGrid &b) {
    checkSameResolution(a, b);
    std::vector<Coord> out;
    std::set_union(a.coords().begin(), a.coords().end(), b.coords().begin(), b.coords().end(),
                   std::back_inserter(out));
    return SparseVoxelGrid::fromCanonical(std::move(out), a.resolution());
}

SparseVoxelGrid
setDifference(const SparseVoxelGrid &a, const SparseVoxelGrid &b) {
    checkSameResolution(a, b);
    std::vector<Coord> out;
    std::set_difference(a.coords().begin(), a.coords().end(), b.coords().begin(), b.coords().end(),
                        std::back_inserter(out));
    return SparseVoxelGrid::fromCanonical(std::move(out), a.resolution());
}

bool
containsAll(const SparseVoxelGrid &superset, const SparseVoxelGrid &subset) {
    checkSameResolution(superset, subset);
    return std::includes(superset.coords().begin(), superset.coords().end(), subset.coords().begin(),
                         subset.coords().end());
}

std::vector<Coord>
missingFrom(const SparseVoxelGrid &superset, const SparseVoxelGrid &subset) {
    const SparseVoxelGrid missing = setDifference(subset, superset);
    return {missing.coords().begin(), missing.coords().end()};
}

namespace {

constexpr char kGridMagic[4] = {'S', 'V', 'O', 'X'};
constexpr char kMaskMagic[4] = {'V', 'M', 'S', 'K'};
constexpr std::uint32_t kFormatVersion = 1;

std::ifstream
openForRead(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path))
            throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return in;
}

std::ofstream
openForWrite(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

void
checkVersion(std::uint32_t version, const std::filesystem::path &path) {
    if (version != kFormatVersion)
        throw Error(ErrorCode::ParseError, path.string() + ": unsupported version " + std::to_string(version));
}

} // namespace

void
saveGrid(const SparseVoxelGrid &grid, const std::filesystem::path &path) {
    auto out = openForWrite(path);
    BinaryWriter w(out);
    w.writeMagic(kGridMagic);
    w.write<std::uint32_t>(kFormatVersion);
    w.write<std::uint32_t>(grid.resolution());
    w.write<std::uint64_t>(grid.size());
    for (const Coord &c : grid.coords()) {
        w.write(c.x);
        w.write(c.y);
        w.write(c.z);
    }
    if (!out)
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

SparseVoxelGrid
loadGrid(const std::filesystem::path &path) {
    auto in = openForRead(path);
    BinaryReader r(in, path.string());
    r.expectMagic(kGridMagic);
    checkVersion(r.read<std::uint32_t>(), path);
    const auto resolution = r.read<std::uint32_t>();
    std::vector<Coord> coords(r.checkedCount(r.read<std::uint64_t>(), 6));
    for (Coord &c : coords) {
        c.x = r.read<std::uint16_t>();
        c.y = r.read<std::uint16_t>();
        c.z = r.read<std::uint16_t>();
    }
    try {
        return SparseVoxelGrid::fromCanonical(std::move(coords), resolution);
    } catch (const Error &e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

void
saveMask(const VoxelMask &mask, const std::filesystem::path &path) {
    auto out = openForWrite(path);
    BinaryWriter w(out);
    w.writeMagic(kMaskMagic);
    w.write<std::uint32_t>(kFormatVersion);
    w.write<std::uint64_t>(mask.size());
    w.write<std::uint8_t>(mask.isSoft() ? 1 : 0);
    for (float v : mask.values()) {
        if (mask.isSoft())
            w.write(v);
        else
            w.write<std::uint8_t>(v >= 0.5f ? 1 : 0);
    }
    if (!out)
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

VoxelMask
loadMask(const std::filesystem::path &path) {
    auto in = openForRead(path);
    BinaryReader r(in, path.string());
    r.expectMagic(kMaskMagic);
    checkVersion(r.read<std::uint32_t>(), path);
    const auto count = r.read<std::uint64_t>();
    const auto kind = r.read<std::uint8_t>();
    try {
        if (kind == 0) {
            std::vector<std::uint8_t> bits(r.checkedCount(count, 1));
            for (auto &b : bits)
                b = r.read<std::uint8_t>();
            return VoxelMask::hard(std::move(bits));
        }
        if (kind == 1) {
            std::vector<float> scores(r.checkedCount(count, 4));
            for (auto &s : scores)
                s = r.read<float>();
            return VoxelMask::soft(std::move(scores));
        }
    } catch (const Error &e) {
        if (e.code() == ErrorCode::ParseError)
            throw;
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    throw Error(ErrorCode::ParseError, path.string() + ": unknown mask kind " + std::to_string(kind));
}

} // namespace voxup
