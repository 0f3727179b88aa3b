// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/camera.h>
#include <voxup/partition.h>
#include <voxup/sparse_voxel.h>

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace voxup {

/// RGBA8 color plus camera-space depth per pixel. Background pixels are
/// transparent black at depth +inf; depth is finite exactly where alpha > 0.
struct RenderImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;
    std::vector<float> depth;

    RenderImage() = default;
    RenderImage(int w, int h)
        : width(w), height(h), rgba(static_cast<std::size_t>(w) * h * 4, 0),
          depth(static_cast<std::size_t>(w) * h, std::numeric_limits<float>::infinity()) {}

    std::size_t pixelIndex(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    std::size_t coveredPixels() const;

    friend bool operator==(const RenderImage &, const RenderImage &) = default;
};

using Rgb8 = std::array<std::uint8_t, 3>;
using Palette = std::function<Rgb8(const Coord &, std::uint32_t resolution)>;

/// Color from the normalized cell coordinate: (x, y, z) / (R - 1) scaled to 255.
Rgb8 coordinatePalette(const Coord &c, std::uint32_t resolution);

/// Opaque, fixed-pixel-radius disks at each voxel center, z-buffered.
/// A pixel is covered when its center lies within the radius of the projected
/// voxel center; only voxels with near <= depth <= far are drawn. Nearest
/// depth wins and equal depths keep the voxel earlier in canonical order.
RenderImage renderFull(const SparseVoxelGrid &grid, const CameraModel &camera, double splatRadiusPx,
                       const Palette &palette = coordinatePalette);

/// Renders only the tile's expanded rect (image sized to that rect), with
/// pixel arithmetic identical to renderFull.
RenderImage renderTile(const SparseVoxelGrid &culled, const CameraModel &camera, const Tile &tile,
                       double splatRadiusPx, const Palette &palette = coordinatePalette);

struct TilePatch {
    Tile tile;
    RenderImage image; // covers tile.expanded
};

/// Assembles the full image, taking each pixel from the patch whose core owns
/// it. Throws CoverageError if the cores leave a gap or overlap.
RenderImage stitch(const std::vector<TilePatch> &patches, int width, int height);

RenderImage crop(const RenderImage &image, const PixelRect &rect);

/// Number of pixels whose color, alpha or depth differ.
std::size_t countDifferingPixels(const RenderImage &a, const RenderImage &b);

} // namespace voxup
