// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/mesh.h>
#include <voxup/sparse_voxel.h>

#include <cstdint>

namespace voxup {

/// Cell i along an axis spans the closed interval [i/R - 0.5, (i+1)/R - 0.5].
inline Vec3 cellCenter(const Coord &c, std::uint32_t resolution) {
    const double r = resolution;
    return {(c.x + 0.5) / r - 0.5, (c.y + 0.5) / r - 0.5, (c.z + 0.5) / r - 0.5};
}

/// The single intersection predicate used by every voxelization path.
bool cellOverlapsTriangle(const Coord &cell, std::uint32_t resolution, const Vec3 &a, const Vec3 &b, const Vec3 &c);

/// Resolutions accepted by the voxelizer: powers of two in [4, 1024].
void validateVoxelizerResolution(std::uint32_t resolution);

/// Conservative surface voxelization: a cell is active iff some triangle
/// intersects its closed box. Triangles are binned by their bounding-box
/// cell range; `threads` splits the triangle list, and the merged result is
/// independent of the thread count.
SparseVoxelGrid voxelizeSurface(const TriangleMesh &mesh, std::uint32_t resolution, unsigned threads = 1);

inline constexpr std::uint32_t kDenseOracleMaxResolution = 32;

/// Tests every cell against every triangle. Same semantics as
/// voxelizeSurface, O(T * R^3); limited to R <= 32.
SparseVoxelGrid voxelizeDenseOracle(const TriangleMesh &mesh, std::uint32_t resolution);

} // namespace voxup
