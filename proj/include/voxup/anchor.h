// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/mesh.h>
#include <voxup/sparse_voxel.h>

#include <cstddef>
#include <cstdint>
#include <span>

namespace voxup {

struct UpsampleReport {
    std::size_t parentCount = 0;
    /// Always 8 * parentCount: children of distinct parents never collide.
    std::size_t candidateCount = 0;
    std::size_t surfaceCount = 0;
    /// 1 - surfaceCount / candidateCount, or 0 when there are no candidates.
    double redundancyRatio = 0.0;
};

/// Replaces each cell (x,y,z) at R with its eight children at 2R.
SparseVoxelGrid upsampleTraditional(const SparseVoxelGrid &grid);

/// Hard mask over `candidates` (canonical order): 1 where the cell is in
/// `truth`. Throws ContainmentViolation, naming the missing cells, if some
/// truth cell is not a candidate.
VoxelMask gtMask(const SparseVoxelGrid &candidates, const SparseVoxelGrid &truth);

/// Same labels as gtMask, but over an arbitrary candidate ordering.
VoxelMask gtMaskForOrder(std::span<const Coord> candidateOrder, const SparseVoxelGrid &truth);

/// Keeps exactly the cells whose hard-mask entry is 1.
SparseVoxelGrid applyMask(const SparseVoxelGrid &grid, const VoxelMask &mask);

/// Every stage of one doubling step: V_R -> upsampled candidates -> GT mask.
struct AnchorResult {
    SparseVoxelGrid coarse;     // V_R
    SparseVoxelGrid candidates; // upsampled V_R at 2R
    SparseVoxelGrid truth;      // V_2R
    VoxelMask mask;             // GT mask over candidates
    UpsampleReport report;
};

AnchorResult runAnchorPipeline(const TriangleMesh &mesh, std::uint32_t resolution, unsigned threads = 1);

UpsampleReport redundancyReport(const TriangleMesh &mesh, std::uint32_t resolution, unsigned threads = 1);

/// Non-learned stand-in for a mask generator. Each candidate scores
/// sigmoid(beta * (tau - d / cellSize)), where d is the exact distance from
/// the cell center to the mesh and tau is in cell units.
VoxelMask surrogateScores(const SparseVoxelGrid &candidates, const TriangleMesh &mesh, double tau, double beta);

/// Exact distance from `point` to the closest triangle of `mesh`.
double distanceToMesh(const TriangleMesh &mesh, const Vec3 &point);

inline constexpr double kBceEpsilon = 1e-7;

/// Mean binary cross-entropy of predictions (clamped to [eps, 1-eps])
/// against a hard target.
double bceLoss(const VoxelMask &pred, const VoxelMask &target);

struct MaskMetrics {
    std::size_t truePositives = 0;
    std::size_t falsePositives = 0;
    std::size_t falseNegatives = 0;
    std::size_t trueNegatives = 0;
    // Empty denominators resolve to 1 (nothing predicted, nothing to find).
    double precision = 1.0;
    double recall = 1.0;
    double iou = 1.0;
};

/// Predictions >= threshold count as positive.
MaskMetrics maskMetrics(const VoxelMask &pred, const VoxelMask &target, double threshold = 0.5);

} // namespace voxup
