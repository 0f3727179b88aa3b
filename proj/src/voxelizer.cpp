// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/voxelizer.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace voxup {

namespace {

void
checkInputs(const TriangleMesh &mesh, std::uint32_t resolution) {
    validateVoxelizerResolution(resolution);
    if (!isNormalized(mesh))
        throw Error(ErrorCode::InvalidArgument, "mesh is not normalized to [-0.5, 0.5]^3");
}

int
clampCell(double v, std::uint32_t resolution) {
    const double hi = static_cast<double>(resolution) - 1.0;
    return static_cast<int>(std::clamp(v, 0.0, hi));
}

void
voxelizeRange(const TriangleMesh &mesh, std::uint32_t resolution, std::size_t first, std::size_t last,
              std::vector<Coord> &out) {
    const double r = resolution;
    for (std::size_t t = first; t < last; ++t) {
        const auto &tri = mesh.triangles[t];
        const Vec3 &a = mesh.vertices[tri[0]], &b = mesh.vertices[tri[1]], &c = mesh.vertices[tri[2]];
        int lo[3], hi[3];
        for (int k = 0; k < 3; ++k) {
            const double mn = std::min({a[k], b[k], c[k]});
            const double mx = std::max({a[k], b[k], c[k]});
            // One cell of padding on each side covers closed-boundary contact.
            lo[k] = clampCell(std::floor((mn + 0.5) * r) - 1.0, resolution);
            hi[k] = clampCell(std::floor((mx + 0.5) * r) + 1.0, resolution);
        }
        for (int x = lo[0]; x <= hi[0]; ++x)
            for (int y = lo[1]; y <= hi[1]; ++y)
                for (int z = lo[2]; z <= hi[2]; ++z) {
                    const Coord cell{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                     static_cast<std::uint16_t>(z)};
                    if (cellOverlapsTriangle(cell, resolution, a, b, c))
                        out.push_back(cell);
                }
    }
}

} // namespace

bool
cellOverlapsTriangle(const Coord &cell, std::uint32_t resolution, const Vec3 &a, const Vec3 &b, const Vec3 &c) {
    return triangleCubeOverlap(cellCenter(cell, resolution), 0.5 / resolution, a, b, c);
}

void
validateVoxelizerResolution(std::uint32_t resolution) {
    if (resolution < 4 || resolution > 1024 || (resolution & (resolution - 1)) != 0)
        throw Error(ErrorCode::InvalidArgument,
                    "voxelization resolution " + std::to_string(resolution) + " must be a power of two in [4, 1024]");
}

SparseVoxelGrid
voxelizeSurface(const TriangleMesh &mesh, std::uint32_t resolution, unsigned threads) {
    checkInputs(mesh, resolution);
    const std::size_t n = mesh.triangles.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));

    std::vector<std::vector<Coord>> partial(threads);
    if (threads == 1) {
        voxelizeRange(mesh, resolution, 0, n, partial[0]);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned i = 0; i < threads; ++i) {
            const std::size_t first = n * i / threads, last = n * (i + 1) / threads;
            workers.emplace_back([&, i, first, last] { voxelizeRange(mesh, resolution, first, last, partial[i]); });
        }
    }

    std::vector<Coord> all;
    for (auto &p : partial)
        all.insert(all.end(), p.begin(), p.end());
    return SparseVoxelGrid::canonicalize(std::move(all), resolution);
}

SparseVoxelGrid
voxelizeDenseOracle(const TriangleMesh &mesh, std::uint32_t resolution) {
    if (resolution > kDenseOracleMaxResolution)
        throw Error(ErrorCode::InvalidArgument, "dense oracle is limited to resolution <= " +
                                                    std::to_string(kDenseOracleMaxResolution));
    checkInputs(mesh, resolution);
    std::vector<Coord> active;
    for (std::uint32_t x = 0; x < resolution; ++x)
        for (std::uint32_t y = 0; y < resolution; ++y)
            for (std::uint32_t z = 0; z < resolution; ++z) {
                const Coord cell{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                 static_cast<std::uint16_t>(z)};
                for (const auto &tri : mesh.triangles) {
                    if (cellOverlapsTriangle(cell, resolution, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]])) {
                        active.push_back(cell);
                        break;
                    }
                }
            }
    return SparseVoxelGrid::fromCanonical(std::move(active), resolution);
}

} // namespace voxup
