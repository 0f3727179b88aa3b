// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/render.h>

#include <json.hpp>

#include <string>
#include <vector>

namespace voxup {

struct TiledRenderOptions {
    int gridN = 2;
    /// Tile pixel margin. The culling world margin is derived from it with
    /// splatWorldMargin, so margin >= splat radius makes culling sound.
    int marginPx = 3;
    double splatRadiusPx = 3.0;
    /// Bounding-sphere size handed to cullVoxels. Splats are drawn from voxel
    /// centers, so 0 culls on the exact drawn footprint.
    double cullVoxelSize = 0.0;
    unsigned threads = 1;
};

struct TiledRender {
    RenderImage image;
    std::vector<std::size_t> keptPerTile;
};

/// Cull per tile, render each expanded rect, stitch by core ownership.
TiledRender renderTiled(const SparseVoxelGrid &grid, const CameraModel &camera, const TiledRenderOptions &options,
                        const Palette &palette = coordinatePalette);

struct StitchComparison {
    std::size_t differingPixels = 0;
    std::size_t coveredPixels = 0;
    std::size_t totalVoxels = 0;
    std::size_t maxKeptPerTile = 0;
};

StitchComparison compareStitched(const SparseVoxelGrid &grid, const CameraModel &camera,
                                 const TiledRenderOptions &options);

struct NamedGrid {
    std::string name;
    SparseVoxelGrid grid;
};

/// Full-vs-stitched comparison for every scene x camera x tiling; the JSON
/// lists each case plus totals.
nlohmann::json stitchCheckReport(const std::vector<NamedGrid> &scenes, const std::vector<CameraModel> &cameras,
                                 const std::vector<int> &tilings, const TiledRenderOptions &base);

} // namespace voxup
