// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/partition.h>
#include <voxup/stitch_check.h>

#include <algorithm>
#include <thread>

namespace voxup {

TiledRender
renderTiled(const SparseVoxelGrid &grid, const CameraModel &camera, const TiledRenderOptions &options,
            const Palette &palette) {
    const std::vector<Tile> tiles = makeTiles(camera, options.gridN, options.marginPx);
    const double worldMargin = splatWorldMargin(camera, options.marginPx);

    std::vector<TilePatch> patches(tiles.size());
    std::vector<std::size_t> kept(tiles.size());
    const auto work = [&](std::size_t i) {
        const CullResult culled = cullVoxels(grid, tileFrustum(camera, tiles[i], worldMargin), options.cullVoxelSize);
        kept[i] = culled.keptCount;
        patches[i] = {tiles[i], renderTile(culled.kept, camera, tiles[i], options.splatRadiusPx, palette)};
    };

    // Tiles are independent; each worker writes only its own slots.
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(tiles.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < tiles.size(); ++i)
            work(i);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t)
            workers.emplace_back([&, t] {
                for (std::size_t i = t; i < tiles.size(); i += threads)
                    work(i);
            });
    }
    return {stitch(patches, camera.width, camera.height), std::move(kept)};
}

StitchComparison
compareStitched(const SparseVoxelGrid &grid, const CameraModel &camera, const TiledRenderOptions &options) {
    const RenderImage full = renderFull(grid, camera, options.splatRadiusPx);
    const TiledRender tiled = renderTiled(grid, camera, options);
    StitchComparison c;
    c.differingPixels = countDifferingPixels(full, tiled.image);
    c.coveredPixels = full.coveredPixels();
    c.totalVoxels = grid.size();
    c.maxKeptPerTile = tiled.keptPerTile.empty() ? 0 : *std::max_element(tiled.keptPerTile.begin(), tiled.keptPerTile.end());
    return c;
}

nlohmann::json
stitchCheckReport(const std::vector<NamedGrid> &scenes, const std::vector<CameraModel> &cameras,
                  const std::vector<int> &tilings, const TiledRenderOptions &base) {
    nlohmann::json cases = nlohmann::json::array();
    std::size_t totalDiffering = 0, exactCases = 0;
    for (const NamedGrid &scene : scenes) {
        for (std::size_t ci = 0; ci < cameras.size(); ++ci) {
            for (int n : tilings) {
                TiledRenderOptions opt = base;
                opt.gridN = n;
                const StitchComparison c = compareStitched(scene.grid, cameras[ci], opt);
                totalDiffering += c.differingPixels;
                exactCases += c.differingPixels == 0 ? 1 : 0;
                cases.push_back({{"scene", scene.name},
                                 {"camera", ci},
                                 {"grid", n},
                                 {"differing_pixels", c.differingPixels},
                                 {"covered_pixels", c.coveredPixels},
                                 {"total_voxels", c.totalVoxels},
                                 {"max_kept_per_tile", c.maxKeptPerTile}});
            }
        }
    }
    return {{"margin_px", base.marginPx},
            {"splat_radius_px", base.splatRadiusPx},
            {"cases", cases},
            {"case_count", cases.size()},
            {"exact_cases", exactCases},
            {"total_differing_pixels", totalDiffering},
            {"all_exact", exactCases == cases.size()}};
}

} // namespace voxup
