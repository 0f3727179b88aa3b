// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/partition.h>
#include <voxup/voxelizer.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace voxup {

namespace {

// Start offset and length of part i when n splits `total`; the first
// (total % n) parts are one longer.
std::pair<int, int>
splitSpan(int total, int n, int i) {
    const int base = total / n, extra = total % n;
    return {i * base + std::min(i, extra), base + (i < extra ? 1 : 0)};
}

PixelRect
clipRect(int x0, int y0, int x1, int y1, int width, int height) {
    x0 = std::clamp(x0, 0, width);
    y0 = std::clamp(y0, 0, height);
    x1 = std::clamp(x1, 0, width);
    y1 = std::clamp(y1, 0, height);
    return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

Plane
toWorld(const CameraModel &camera, const Vec3 &cameraNormal, double cameraOffset) {
    const double len = length(cameraNormal);
    const Vec3 n = cameraNormal * (1.0 / len);
    const double offset = cameraOffset / len;
    return {camera.rotation.transposed() * n, dot(n, camera.translation) + offset};
}

} // namespace

std::vector<Tile>
makeTiles(const CameraModel &camera, int gridN, int margin, std::optional<PixelRect> region) {
    camera.validate();
    const PixelRect area = region.value_or(PixelRect{0, 0, camera.width, camera.height});
    if (!PixelRect{0, 0, camera.width, camera.height}.contains(area))
        throw Error(ErrorCode::InvalidArgument, "tiling region lies outside the image");
    if (gridN < 1)
        throw Error(ErrorCode::InvalidArgument, "tile grid must be at least 1x1");
    if (gridN > area.w || gridN > area.h)
        throw Error(ErrorCode::InvalidArgument, "tile grid " + std::to_string(gridN) + " exceeds region size " +
                                                    std::to_string(area.w) + "x" + std::to_string(area.h));
    if (margin < 0)
        throw Error(ErrorCode::InvalidArgument, "tile margin must be >= 0");

    std::vector<Tile> tiles;
    tiles.reserve(static_cast<std::size_t>(gridN) * gridN);
    for (int row = 0; row < gridN; ++row) {
        const auto [y, h] = splitSpan(area.h, gridN, row);
        for (int col = 0; col < gridN; ++col) {
            const auto [x, w] = splitSpan(area.w, gridN, col);
            Tile t;
            t.core = {area.x0 + x, area.y0 + y, w, h};
            t.margin = margin;
            t.expanded = clipRect(t.core.x0 - margin, t.core.y0 - margin, t.core.x1() + margin, t.core.y1() + margin,
                                  camera.width, camera.height);
            tiles.push_back(t);
        }
    }
    return tiles;
}

PixelRect
foregroundRegion(const SparseVoxelGrid &grid, const CameraModel &camera) {
    camera.validate();
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    const double half = 0.5 / grid.resolution();
    for (const Coord &c : grid.coords()) {
        const Vec3 center = cellCenter(c, grid.resolution());
        for (int corner = 0; corner < 8; ++corner) {
            const Vec3 p = center + Vec3{corner & 1 ? half : -half, corner & 2 ? half : -half, corner & 4 ? half : -half};
            const auto proj = project(camera, p);
            if (!proj)
                return {0, 0, camera.width, camera.height};
            lo[0] = std::min(lo[0], proj->u);
            lo[1] = std::min(lo[1], proj->v);
            hi[0] = std::max(hi[0], proj->u);
            hi[1] = std::max(hi[1], proj->v);
        }
    }
    if (grid.empty())
        return {};
    const auto bound = [](double v) {
        return static_cast<int>(std::clamp(v, -1e9, 1e9));
    };
    return clipRect(bound(std::floor(lo[0])), bound(std::floor(lo[1])), bound(std::ceil(hi[0])) + 1,
                    bound(std::ceil(hi[1])) + 1, camera.width, camera.height);
}

std::size_t
sampleTileIndex(std::size_t tileCount, std::uint64_t seed, std::uint64_t step) {
    if (tileCount == 0)
        throw Error(ErrorCode::InvalidArgument, "cannot sample from an empty tile list");
    return static_cast<std::size_t>(splitmix64(seed ^ step) % tileCount);
}

const Tile &
sampleTile(std::span<const Tile> tiles, std::uint64_t seed, std::uint64_t step) {
    return tiles[sampleTileIndex(tiles.size(), seed, step)];
}

bool
TileFrustum::contains(const Vec3 &p) const {
    return std::all_of(planes.begin(), planes.end(), [&](const Plane &pl) { return pl.signedDistance(p) >= 0.0; });
}

bool
TileFrustum::intersectsSphere(const Vec3 &center, double radius) const {
    return std::all_of(planes.begin(), planes.end(),
                       [&](const Plane &pl) { return pl.signedDistance(center) >= -radius; });
}

TileFrustum
tileFrustum(const CameraModel &camera, const Tile &tile, double worldMargin) {
    camera.validate();
    if (!(worldMargin >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "world margin must be >= 0");
    const PixelRect &r = tile.expanded;
    if (r.w <= 0 || r.h <= 0 || !PixelRect{0, 0, camera.width, camera.height}.contains(r))
        throw Error(ErrorCode::InvalidArgument, "tile lies outside the image");

    // Camera-space planes n.p + d >= 0 through the optical center and the
    // rect's pixel edges: u >= x0, u <= x1, v >= y0, v <= y1.
    const double fx = camera.fx, fy = camera.fy, cx = camera.cx, cy = camera.cy;
    TileFrustum f;
    f.planes[0] = toWorld(camera, {fx, 0.0, cx - r.x0}, 0.0);
    f.planes[1] = toWorld(camera, {-fx, 0.0, r.x1() - cx}, 0.0);
    f.planes[2] = toWorld(camera, {0.0, fy, cy - r.y0}, 0.0);
    f.planes[3] = toWorld(camera, {0.0, -fy, r.y1() - cy}, 0.0);
    f.planes[4] = toWorld(camera, {0.0, 0.0, 1.0}, -camera.nearDepth);
    f.planes[5] = toWorld(camera, {0.0, 0.0, -1.0}, camera.farDepth);
    for (int i = 0; i < 4; ++i)
        f.planes[static_cast<size_t>(i)].offset += worldMargin;
    return f;
}

TileFrustum
cameraFrustum(const CameraModel &camera) {
    camera.validate();
    const double w = camera.width, h = camera.height;
    const Vec3 eye = camera.center();
    const Vec3 interior = unproject(camera, 0.5 * w, 0.5 * h, 0.5 * (camera.nearDepth + camera.farDepth));

    // Plane through the eye and the far-depth points of two image corners.
    const auto sidePlane = [&](double u0, double v0, double u1, double v1) {
        const Vec3 a = unproject(camera, u0, v0, camera.farDepth) - eye;
        const Vec3 b = unproject(camera, u1, v1, camera.farDepth) - eye;
        Vec3 n = normalized(cross(a, b));
        if (dot(n, interior - eye) < 0.0)
            n = -n;
        return Plane{n, -dot(n, eye)};
    };
    const Vec3 forward = camera.rotation.row(2);
    const Vec3 nearPoint = unproject(camera, camera.cx, camera.cy, camera.nearDepth);
    const Vec3 farPoint = unproject(camera, camera.cx, camera.cy, camera.farDepth);

    TileFrustum f;
    f.planes[0] = sidePlane(0, 0, 0, h);
    f.planes[1] = sidePlane(w, 0, w, h);
    f.planes[2] = sidePlane(0, 0, w, 0);
    f.planes[3] = sidePlane(0, h, w, h);
    f.planes[4] = {forward, -dot(forward, nearPoint)};
    f.planes[5] = {-forward, dot(forward, farPoint)};
    return f;
}

double
splatWorldMargin(const CameraModel &camera, double splatRadiusPx) {
    if (!(splatRadiusPx >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "splat radius must be >= 0");
    return camera.farDepth * splatRadiusPx / std::min(camera.fx, camera.fy);
}

CullResult
cullVoxels(const SparseVoxelGrid &grid, const TileFrustum &frustum, double voxelWorldSize) {
    if (!(voxelWorldSize >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "voxel world size must be >= 0");
    const double radius = voxelWorldSize * std::sqrt(3.0) / 2.0;
    std::vector<Coord> kept;
    for (const Coord &c : grid.coords())
        if (frustum.intersectsSphere(cellCenter(c, grid.resolution()), radius))
            kept.push_back(c);
    CullResult out;
    out.keptCount = kept.size();
    out.kept = SparseVoxelGrid::fromCanonical(std::move(kept), grid.resolution());
    return out;
}

} // namespace voxup
