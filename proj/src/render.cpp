// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/render.h>
#include <voxup/voxelizer.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace voxup {

std::size_t
RenderImage::coveredPixels() const {
    std::size_t n = 0;
    for (std::size_t i = 3; i < rgba.size(); i += 4)
        n += rgba[i] > 0 ? 1 : 0;
    return n;
}

Rgb8
coordinatePalette(const Coord &c, std::uint32_t resolution) {
    const std::uint32_t denom = resolution > 1 ? resolution - 1 : 1;
    const auto channel = [&](std::uint16_t v) { return static_cast<std::uint8_t>((255u * v) / denom); };
    return {channel(c.x), channel(c.y), channel(c.z)};
}

namespace {

// Rasterizes `grid` into the pixels of `rect` (image coordinates). The output
// image covers exactly `rect`.
RenderImage
rasterize(const SparseVoxelGrid &grid, const CameraModel &camera, const PixelRect &rect, double radius,
          const Palette &palette) {
    RenderImage img(rect.w, rect.h);
    std::vector<double> zbuf(img.depth.size(), std::numeric_limits<double>::infinity());
    const double r2 = radius * radius;
    for (const Coord &c : grid.coords()) {
        const auto p = project(camera, cellCenter(c, grid.resolution()));
        if (!p || p->depth < camera.nearDepth || p->depth > camera.farDepth)
            continue;
        // Pixel px is covered when |px + 0.5 - u| <= radius (and likewise in v).
        const double bx0 = std::ceil(p->u - radius - 0.5), bx1 = std::floor(p->u + radius - 0.5);
        const double by0 = std::ceil(p->v - radius - 0.5), by1 = std::floor(p->v + radius - 0.5);
        if (bx0 > rect.x1() - 1 || bx1 < rect.x0 || by0 > rect.y1() - 1 || by1 < rect.y0)
            continue;
        const int x0 = static_cast<int>(std::max<double>(bx0, rect.x0));
        const int x1 = static_cast<int>(std::min<double>(bx1, rect.x1() - 1));
        const int y0 = static_cast<int>(std::max<double>(by0, rect.y0));
        const int y1 = static_cast<int>(std::min<double>(by1, rect.y1() - 1));
        const Rgb8 color = palette(c, grid.resolution());
        for (int y = y0; y <= y1; ++y) {
            const double dy = y + 0.5 - p->v;
            for (int x = x0; x <= x1; ++x) {
                const double dx = x + 0.5 - p->u;
                if (dx * dx + dy * dy > r2)
                    continue;
                const std::size_t i = img.pixelIndex(x - rect.x0, y - rect.y0);
                if (!(p->depth < zbuf[i]))
                    continue;
                zbuf[i] = p->depth;
                img.depth[i] = static_cast<float>(p->depth);
                img.rgba[4 * i + 0] = color[0];
                img.rgba[4 * i + 1] = color[1];
                img.rgba[4 * i + 2] = color[2];
                img.rgba[4 * i + 3] = 255;
            }
        }
    }
    return img;
}

void
checkRadius(double radius) {
    if (!(radius >= 0.5))
        throw Error(ErrorCode::InvalidArgument, "splat radius must be >= 0.5 px");
}

} // namespace

RenderImage
renderFull(const SparseVoxelGrid &grid, const CameraModel &camera, double splatRadiusPx, const Palette &palette) {
    camera.validate();
    checkRadius(splatRadiusPx);
    return rasterize(grid, camera, {0, 0, camera.width, camera.height}, splatRadiusPx, palette);
}

RenderImage
renderTile(const SparseVoxelGrid &culled, const CameraModel &camera, const Tile &tile, double splatRadiusPx,
           const Palette &palette) {
    camera.validate();
    checkRadius(splatRadiusPx);
    const PixelRect image{0, 0, camera.width, camera.height};
    if (tile.expanded.w <= 0 || tile.expanded.h <= 0 || !image.contains(tile.expanded) ||
        !tile.expanded.contains(tile.core))
        throw Error(ErrorCode::InvalidArgument, "tile lies outside the image");
    return rasterize(culled, camera, tile.expanded, splatRadiusPx, palette);
}

RenderImage
crop(const RenderImage &image, const PixelRect &rect) {
    if (!PixelRect{0, 0, image.width, image.height}.contains(rect))
        throw Error(ErrorCode::InvalidArgument, "crop rect outside image");
    RenderImage out(rect.w, rect.h);
    for (int y = 0; y < rect.h; ++y) {
        const std::size_t src = image.pixelIndex(rect.x0, rect.y0 + y);
        const std::size_t dst = out.pixelIndex(0, y);
        std::memcpy(&out.rgba[4 * dst], &image.rgba[4 * src], 4 * static_cast<std::size_t>(rect.w));
        std::memcpy(&out.depth[dst], &image.depth[src], sizeof(float) * static_cast<std::size_t>(rect.w));
    }
    return out;
}

RenderImage
stitch(const std::vector<TilePatch> &patches, int width, int height) {
    if (width < 1 || height < 1)
        throw Error(ErrorCode::InvalidArgument, "stitched image must be at least 1x1");
    const PixelRect bounds{0, 0, width, height};
    std::vector<std::uint8_t> owners(static_cast<std::size_t>(width) * height, 0);
    for (const TilePatch &p : patches) {
        if (!bounds.contains(p.tile.core) || !p.tile.expanded.contains(p.tile.core))
            throw Error(ErrorCode::CoverageError, "tile core outside image or expanded rect");
        if (p.image.width != p.tile.expanded.w || p.image.height != p.tile.expanded.h)
            throw Error(ErrorCode::SizeMismatch, "patch size does not match its expanded rect");
        for (int y = p.tile.core.y0; y < p.tile.core.y1(); ++y)
            for (int x = p.tile.core.x0; x < p.tile.core.x1(); ++x) {
                auto &o = owners[static_cast<std::size_t>(y) * width + x];
                if (o != 0)
                    throw Error(ErrorCode::CoverageError, "tile cores overlap at pixel (" + std::to_string(x) + "," +
                                                              std::to_string(y) + ")");
                o = 1;
            }
    }
    if (const auto gap = std::find(owners.begin(), owners.end(), 0); gap != owners.end()) {
        const auto i = static_cast<int>(gap - owners.begin());
        throw Error(ErrorCode::CoverageError, "no tile core covers pixel (" + std::to_string(i % width) + "," +
                                                  std::to_string(i / width) + ")");
    }

    RenderImage out(width, height);
    for (const TilePatch &p : patches) {
        const PixelRect &core = p.tile.core;
        for (int y = core.y0; y < core.y1(); ++y) {
            const std::size_t src = p.image.pixelIndex(core.x0 - p.tile.expanded.x0, y - p.tile.expanded.y0);
            const std::size_t dst = out.pixelIndex(core.x0, y);
            std::memcpy(&out.rgba[4 * dst], &p.image.rgba[4 * src], 4 * static_cast<std::size_t>(core.w));
            std::memcpy(&out.depth[dst], &p.image.depth[src], sizeof(float) * static_cast<std::size_t>(core.w));
        }
    }
    return out;
}

std::size_t
countDifferingPixels(const RenderImage &a, const RenderImage &b) {
    if (a.width != b.width || a.height != b.height)
        throw Error(ErrorCode::SizeMismatch, "image dimensions differ");
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.depth.size(); ++i) {
        const bool sameDepth = std::memcmp(&a.depth[i], &b.depth[i], sizeof(float)) == 0;
        if (!sameDepth || std::memcmp(&a.rgba[4 * i], &b.rgba[4 * i], 4) != 0)
            ++n;
    }
    return n;
}

} // namespace voxup
