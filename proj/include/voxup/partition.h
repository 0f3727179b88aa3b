// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/camera.h>
#include <voxup/sparse_voxel.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace voxup {

/// Half-open pixel rectangle [x0, x0+w) x [y0, y0+h).
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;

    int x1() const { return x0 + w; }
    int y1() const { return y0 + h; }
    std::size_t area() const { return static_cast<std::size_t>(w) * static_cast<std::size_t>(h); }
    bool contains(int x, int y) const { return x >= x0 && x < x1() && y >= y0 && y < y1(); }
    bool contains(const PixelRect &o) const {
        return o.x0 >= x0 && o.y0 >= y0 && o.x1() <= x1() && o.y1() <= y1();
    }

    friend bool operator==(const PixelRect &, const PixelRect &) = default;
};

/// One cell of a view-domain tiling. Cores of a tiling are disjoint and cover
/// the tiled region; `expanded` is the core grown by `margin` and clipped to
/// the image.
struct Tile {
    PixelRect core;
    int margin = 0;
    PixelRect expanded;

    friend bool operator==(const Tile &, const Tile &) = default;
};

/// Splits `region` (default: the whole image) into gridN x gridN tiles.
/// Core sizes differ by at most one pixel; leading rows/columns take the
/// remainder.
std::vector<Tile> makeTiles(const CameraModel &camera, int gridN, int margin,
                            std::optional<PixelRect> region = std::nullopt);

/// Pixel bounding box of the projected voxel cubes, clipped to the image.
/// Empty rect when nothing projects in front of the camera.
PixelRect foregroundRegion(const SparseVoxelGrid &grid, const CameraModel &camera);

/// Index of the tile chosen at training step `step`:
/// splitmix64(seed ^ step) mod tile count.
std::size_t sampleTileIndex(std::size_t tileCount, std::uint64_t seed, std::uint64_t step);

const Tile &sampleTile(std::span<const Tile> tiles, std::uint64_t seed, std::uint64_t step);

struct Plane {
    Vec3 normal; // unit length
    double offset = 0.0;

    double signedDistance(const Vec3 &p) const { return dot(normal, p) + offset; }
};

/// World-space view volume of a tile: left, right, top, bottom, near, far.
struct TileFrustum {
    std::array<Plane, 6> planes;

    bool contains(const Vec3 &p) const;
    /// Conservative sphere test: false only if the sphere is fully outside
    /// some plane.
    bool intersectsSphere(const Vec3 &center, double radius) const;
};

/// Frustum through the pixel corners of the tile's expanded rect, between
/// the near and far depths. Side planes are pushed outward by `worldMargin`.
TileFrustum tileFrustum(const CameraModel &camera, const Tile &tile, double worldMargin = 0.0);

/// The camera's whole-image frustum, built directly from the image bounds.
TileFrustum cameraFrustum(const CameraModel &camera);

/// Side-plane push that keeps every voxel whose splat (radius in pixels)
/// can reach into a tile: farDepth * radius / min(fx, fy).
double splatWorldMargin(const CameraModel &camera, double splatRadiusPx);

struct CullResult {
    SparseVoxelGrid kept;
    std::size_t keptCount = 0;
};

/// Keeps a voxel iff its bounding sphere (radius voxelWorldSize * sqrt(3)/2
/// around the cell center) intersects the frustum.
CullResult cullVoxels(const SparseVoxelGrid &grid, const TileFrustum &frustum, double voxelWorldSize);

} // namespace voxup
