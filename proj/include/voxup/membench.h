// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/anchor.h>
#include <voxup/camera.h>
#include <voxup/mesh.h>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace voxup {

/// Byte costs behind the modeled footprint. These model counts, not a real
/// allocator: only orderings and ratios between configurations are meaningful.
struct MemoryModel {
    std::uint64_t bytesPerVoxelFeature = 256;
    std::uint64_t bytesPerSplat = 1792;
    std::uint64_t overheadBytes = 0;
    /// Optional device ceiling; 0 disables the over-budget flag.
    std::uint64_t ceilingBytes = 0;
};

MemoryModel memoryModelFromJson(const nlohmann::json &j);
nlohmann::json memoryModelToJson(const MemoryModel &model);

/// raw: upsampled candidates, unmasked. mask: GT-pruned voxels.
/// block: pruned voxels, splat term limited to the largest culled tile.
struct BenchConfig {
    enum class Kind { Raw, Mask, MaskBlock } kind = Kind::Raw;
    int blockN = 0;

    static BenchConfig raw() { return {Kind::Raw, 0}; }
    static BenchConfig mask() { return {Kind::Mask, 0}; }
    static BenchConfig maskBlock(int n) { return {Kind::MaskBlock, n}; }

    std::string name() const;
};

struct BenchOptions {
    double splatRadiusPx = 3.0;
    /// Tile pixel margin; the culling world margin is derived from it.
    int marginPx = 3;
    unsigned threads = 1;
};

struct ConfigReport {
    std::string config;
    std::uint32_t resolution = 0;
    std::uint64_t liveVoxels = 0;
    /// Largest per-tile culled count over all tiles and cameras (blocked
    /// configurations only; equals liveVoxels otherwise).
    std::uint64_t peakTileVoxels = 0;
    std::uint64_t modeledBytes = 0;
    bool exceedsCeiling = false;
};

/// overhead + bytesPerVoxelFeature * live + bytesPerSplat * splatCount.
std::uint64_t modeledBytes(const MemoryModel &model, std::uint64_t liveVoxels, std::uint64_t splatVoxels);

/// Largest culled voxel count over every tile of an N x N tiling, over all cameras.
std::uint64_t peakTileVoxels(const SparseVoxelGrid &grid, const std::vector<CameraModel> &cameras, int gridN,
                             const BenchOptions &options);

/// One configuration on a precomputed anchoring step.
ConfigReport benchConfig(const AnchorResult &anchor, const BenchConfig &config,
                         const std::vector<CameraModel> &cameras, const MemoryModel &model,
                         const BenchOptions &options = {});

/// Runs the anchoring pipeline at R -> 2R, then one configuration.
ConfigReport benchConfig(const TriangleMesh &mesh, std::uint32_t resolution, const BenchConfig &config,
                         const std::vector<CameraModel> &cameras, const MemoryModel &model,
                         const BenchOptions &options = {});

/// The four rows raw, mask, mask+block 2x2, mask+block 4x4 from one pipeline run.
std::vector<ConfigReport> benchTable(const AnchorResult &anchor, const std::vector<CameraModel> &cameras,
                                     const MemoryModel &model, const BenchOptions &options = {});

nlohmann::json benchTableToJson(const std::vector<ConfigReport> &rows, const AnchorResult &anchor,
                                const MemoryModel &model);
std::string benchTableToCsv(const std::vector<ConfigReport> &rows);

} // namespace voxup
