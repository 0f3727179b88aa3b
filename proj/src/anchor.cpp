// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/anchor.h>
#include <voxup/error.h>
#include <voxup/voxelizer.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

namespace voxup {

SparseVoxelGrid
upsampleTraditional(const SparseVoxelGrid &grid) {
    const std::uint64_t target = std::uint64_t{grid.resolution()} * 2;
    if (target > kMaxResolution)
        throw Error(ErrorCode::OutOfRange, "upsampling resolution " + std::to_string(grid.resolution()) +
                                               " would exceed " + std::to_string(kMaxResolution));
    std::vector<Coord> children;
    children.reserve(grid.size() * 8);
    for (const Coord &p : grid.coords())
        for (std::uint16_t dx = 0; dx < 2; ++dx)
            for (std::uint16_t dy = 0; dy < 2; ++dy)
                for (std::uint16_t dz = 0; dz < 2; ++dz)
                    children.push_back({static_cast<std::uint16_t>(2 * p.x + dx),
                                        static_cast<std::uint16_t>(2 * p.y + dy),
                                        static_cast<std::uint16_t>(2 * p.z + dz)});
    std::sort(children.begin(), children.end());
    return SparseVoxelGrid::fromCanonical(std::move(children), static_cast<std::uint32_t>(target));
}

namespace {

[[noreturn]] void
throwContainment(const std::vector<Coord> &missing) {
    std::string msg = std::to_string(missing.size()) +
                      " truth voxel(s) are not among the upsampled candidates (non-conservative voxelization?):";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 8); ++i) {
        const Coord &c = missing[i];
        msg += " (" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
    }
    if (missing.size() > 8)
        msg += " ...";
    throw Error(ErrorCode::ContainmentViolation, msg);
}

} // namespace

VoxelMask
gtMask(const SparseVoxelGrid &candidates, const SparseVoxelGrid &truth) {
    if (candidates.resolution() != truth.resolution())
        throw Error(ErrorCode::ResolutionMismatch, "candidate and truth resolutions differ");
    std::vector<std::uint8_t> bits(candidates.size(), 0);
    std::vector<Coord> missing;
    // Merge walk over two canonical sequences.
    std::size_t i = 0;
    for (const Coord &t : truth.coords()) {
        while (i < candidates.size() && candidates[i] < t)
            ++i;
        if (i < candidates.size() && candidates[i] == t)
            bits[i] = 1;
        else
            missing.push_back(t);
    }
    if (!missing.empty())
        throwContainment(missing);
    return VoxelMask::hard(std::move(bits));
}

VoxelMask
gtMaskForOrder(std::span<const Coord> candidateOrder, const SparseVoxelGrid &truth) {
    std::unordered_set<std::uint64_t> present;
    present.reserve(candidateOrder.size());
    for (const Coord &c : candidateOrder)
        present.insert(packCoord(c));
    std::vector<Coord> missing;
    for (const Coord &t : truth.coords())
        if (!present.contains(packCoord(t)))
            missing.push_back(t);
    if (!missing.empty())
        throwContainment(missing);

    std::vector<std::uint8_t> bits(candidateOrder.size());
    for (std::size_t i = 0; i < candidateOrder.size(); ++i)
        bits[i] = truth.contains(candidateOrder[i]) ? 1 : 0;
    return VoxelMask::hard(std::move(bits));
}

SparseVoxelGrid
applyMask(const SparseVoxelGrid &grid, const VoxelMask &mask) {
    if (mask.size() != grid.size())
        throw Error(ErrorCode::SizeMismatch, "mask length " + std::to_string(mask.size()) +
                                                 " does not match grid size " + std::to_string(grid.size()));
    if (mask.isSoft())
        throw Error(ErrorCode::InvalidArgument, "applyMask needs a hard mask");
    std::vector<Coord> kept;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (mask[i] == 1.0f)
            kept.push_back(grid[i]);
    return SparseVoxelGrid::fromCanonical(std::move(kept), grid.resolution());
}

AnchorResult
runAnchorPipeline(const TriangleMesh &mesh, std::uint32_t resolution, unsigned threads) {
    validateVoxelizerResolution(resolution);
    validateVoxelizerResolution(resolution * 2);
    AnchorResult out;
    out.coarse = voxelizeSurface(mesh, resolution, threads);
    out.candidates = upsampleTraditional(out.coarse);
    out.truth = voxelizeSurface(mesh, resolution * 2, threads);
    out.mask = gtMask(out.candidates, out.truth);

    out.report.parentCount = out.coarse.size();
    out.report.candidateCount = out.candidates.size();
    out.report.surfaceCount = out.mask.popcount();
    out.report.redundancyRatio =
        out.report.candidateCount == 0
            ? 0.0
            : 1.0 - static_cast<double>(out.report.surfaceCount) / static_cast<double>(out.report.candidateCount);
    return out;
}

UpsampleReport
redundancyReport(const TriangleMesh &mesh, std::uint32_t resolution, unsigned threads) {
    return runAnchorPipeline(mesh, resolution, threads).report;
}

namespace {

// Uniform bin grid over the unit cube for nearest-triangle queries.
class MeshDistanceIndex {
public:
    explicit MeshDistanceIndex(const TriangleMesh &mesh) : mMesh(mesh) {
        const auto t = static_cast<double>(mesh.triangles.size());
        mBins = std::clamp(static_cast<int>(std::cbrt(t)), 1, 64);
        mBinSize = 1.0 / mBins;
        mCells.resize(static_cast<std::size_t>(mBins) * mBins * mBins);
        for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
            const auto &tri = mesh.triangles[i];
            int lo[3], hi[3];
            for (int k = 0; k < 3; ++k) {
                const double mn = std::min({mesh.vertices[tri[0]][k], mesh.vertices[tri[1]][k], mesh.vertices[tri[2]][k]});
                const double mx = std::max({mesh.vertices[tri[0]][k], mesh.vertices[tri[1]][k], mesh.vertices[tri[2]][k]});
                lo[k] = binOf(mn);
                hi[k] = binOf(mx);
            }
            for (int x = lo[0]; x <= hi[0]; ++x)
                for (int y = lo[1]; y <= hi[1]; ++y)
                    for (int z = lo[2]; z <= hi[2]; ++z)
                        mCells[flat(x, y, z)].push_back(static_cast<std::uint32_t>(i));
        }
    }

    double distance(const Vec3 &p) const {
        const int b[3] = {binOf(p.x), binOf(p.y), binOf(p.z)};
        double best = std::numeric_limits<double>::infinity();
        for (int shell = 0; shell < mBins; ++shell) {
            for (int x = b[0] - shell; x <= b[0] + shell; ++x)
                for (int y = b[1] - shell; y <= b[1] + shell; ++y)
                    for (int z = b[2] - shell; z <= b[2] + shell; ++z) {
                        if (std::max({std::abs(x - b[0]), std::abs(y - b[1]), std::abs(z - b[2])}) != shell)
                            continue;
                        if (x < 0 || y < 0 || z < 0 || x >= mBins || y >= mBins || z >= mBins)
                            continue;
                        for (std::uint32_t t : mCells[flat(x, y, z)]) {
                            const auto &tri = mMesh.triangles[t];
                            best = std::min(best, pointTriangleDistance(p, mMesh.vertices[tri[0]],
                                                                        mMesh.vertices[tri[1]], mMesh.vertices[tri[2]]));
                        }
                    }
            // Anything not yet visited lies at least `shell` whole bins away.
            if (best <= shell * mBinSize)
                return best;
        }
        return best;
    }

private:
    int binOf(double v) const {
        return std::clamp(static_cast<int>(std::floor((v + 0.5) * mBins)), 0, mBins - 1);
    }
    std::size_t flat(int x, int y, int z) const {
        return (static_cast<std::size_t>(x) * mBins + y) * mBins + z;
    }

    const TriangleMesh &mMesh;
    int mBins = 1;
    double mBinSize = 1.0;
    std::vector<std::vector<std::uint32_t>> mCells;
};

void
checkDistanceQueryMesh(const TriangleMesh &mesh) {
    if (mesh.empty())
        throw Error(ErrorCode::InvalidArgument, "distance queries need a non-empty mesh");
    if (!isNormalized(mesh))
        throw Error(ErrorCode::InvalidArgument, "mesh is not normalized to [-0.5, 0.5]^3");
}

} // namespace

double
distanceToMesh(const TriangleMesh &mesh, const Vec3 &point) {
    checkDistanceQueryMesh(mesh);
    return MeshDistanceIndex(mesh).distance(point);
}

VoxelMask
surrogateScores(const SparseVoxelGrid &candidates, const TriangleMesh &mesh, double tau, double beta) {
    if (!(tau > 0.0) || !(beta > 0.0))
        throw Error(ErrorCode::InvalidArgument, "surrogate scoring needs tau > 0 and beta > 0");
    checkDistanceQueryMesh(mesh);
    const MeshDistanceIndex index(mesh);
    const double cellSize = 1.0 / candidates.resolution();
    std::vector<float> scores(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double d = index.distance(cellCenter(candidates[i], candidates.resolution()));
        const double logit = beta * (tau - d / cellSize);
        scores[i] = static_cast<float>(1.0 / (1.0 + std::exp(-logit)));
    }
    return VoxelMask::soft(std::move(scores));
}

double
bceLoss(const VoxelMask &pred, const VoxelMask &target) {
    if (pred.size() != target.size())
        throw Error(ErrorCode::SizeMismatch, "prediction and target lengths differ");
    if (target.isSoft())
        throw Error(ErrorCode::InvalidArgument, "BCE target must be a hard mask");
    if (pred.size() == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = std::clamp(static_cast<double>(pred[i]), kBceEpsilon, 1.0 - kBceEpsilon);
        sum -= target[i] == 1.0f ? std::log(p) : std::log1p(-p);
    }
    return sum / static_cast<double>(pred.size());
}

MaskMetrics
maskMetrics(const VoxelMask &pred, const VoxelMask &target, double threshold) {
    if (pred.size() != target.size())
        throw Error(ErrorCode::SizeMismatch, "prediction and target lengths differ");
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
    MaskMetrics m;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] >= threshold;
        const bool t = target[i] >= 0.5f;
        if (p && t)
            ++m.truePositives;
        else if (p)
            ++m.falsePositives;
        else if (t)
            ++m.falseNegatives;
        else
            ++m.trueNegatives;
    }
    const auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    m.precision = ratio(m.truePositives, m.truePositives + m.falsePositives);
    m.recall = ratio(m.truePositives, m.truePositives + m.falseNegatives);
    m.iou = ratio(m.truePositives, m.truePositives + m.falsePositives + m.falseNegatives);
    return m;
}

} // namespace voxup
