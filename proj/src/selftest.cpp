// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/anchor.h>
#include <voxup/error.h>
#include <voxup/fixtures.h>
#include <voxup/image_io.h>
#include <voxup/image_metrics.h>
#include <voxup/membench.h>
#include <voxup/partition.h>
#include <voxup/render.h>
#include <voxup/selftest.h>
#include <voxup/stitch_check.h>
#include <voxup/voxelizer.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace voxup {

namespace {

class Group {
public:
    explicit Group(std::string name) : mName(std::move(name)) {}

    void check(const std::string &name, bool ok, nlohmann::json detail = nullptr) {
        nlohmann::json c = {{"name", name}, {"passed", ok}};
        if (!detail.is_null())
            c["detail"] = std::move(detail);
        mChecks.push_back(std::move(c));
        mPassed = mPassed && ok;
    }

    /// Runs `body`, recording an unexpected exception as a failed check.
    template <typename F>
    void guarded(F &&body) {
        try {
            body(*this);
        } catch (const std::exception &e) {
            check("unexpected exception", false, e.what());
        }
    }

    bool passed() const { return mPassed; }
    nlohmann::json json() const { return {{"name", mName}, {"passed", mPassed}, {"checks", mChecks}}; }

private:
    std::string mName;
    nlohmann::json mChecks = nlohmann::json::array();
    bool mPassed = true;
};

std::vector<Coord>
randomCoords(SplitMix64 &rng, std::size_t n, std::uint32_t resolution) {
    std::vector<Coord> out(n);
    for (Coord &c : out)
        c = {static_cast<std::uint16_t>(rng.below(resolution)), static_cast<std::uint16_t>(rng.below(resolution)),
             static_cast<std::uint16_t>(rng.below(resolution))};
    return out;
}

template <typename T>
void
shuffle(std::vector<T> &v, SplitMix64 &rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

void
meshGroup(Group &g, const std::filesystem::path &outDir) {
    PrimitiveParams cubeParams;
    g.check("cube has 12 triangles", makePrimitive(PrimitiveKind::Cube, cubeParams).triangleCount() == 12);
    bool icoOk = true;
    for (int n = 0; n <= 3; ++n) {
        PrimitiveParams p;
        p.subdivision = n;
        const TriangleMesh m = makePrimitive(PrimitiveKind::Sphere, p);
        const std::size_t f = 20 * (std::size_t{1} << (2 * n));
        icoOk = icoOk && m.triangleCount() == f && m.vertexCount() == f / 2 + 2;
    }
    g.check("icosphere counts 20*4^n / 10*4^n+2", icoOk);
    g.check("torus 32x16 has 1024 triangles", makePrimitive(PrimitiveKind::Torus, {}).triangleCount() == 1024);

    const TriangleMesh box = normalizeMesh(transformed(makePrimitive(PrimitiveKind::Cube, {}), Mat3::identity(),
                                                       {3, -1, 2}, 2.0));
    g.check("normalize is idempotent", normalizeMesh(box) == box);

    const auto path = outDir / "selftest_torus.vmsh";
    const TriangleMesh torus = fixtureByName("torus").mesh;
    saveMeshBinary(torus, path);
    g.check("binary mesh round-trip is bit-exact", loadMesh(path) == torus);
}

void
sparseGroup(Group &g, SplitMix64 &rng) {
    std::vector<Coord> a = randomCoords(rng, 5000, 32), b = randomCoords(rng, 5000, 32);
    const auto ga = SparseVoxelGrid::canonicalize(a, 32), gb = SparseVoxelGrid::canonicalize(b, 32);
    std::set<Coord> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::set<Coord> inter, uni, diff;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.end()));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.end()));
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(diff, diff.end()));
    const auto same = [](const SparseVoxelGrid &grid, const std::set<Coord> &s) {
        return std::equal(grid.coords().begin(), grid.coords().end(), s.begin(), s.end());
    };
    g.check("set algebra matches ordered-set oracle",
            same(ga, sa) && same(setIntersect(ga, gb), inter) && same(setUnion(ga, gb), uni) &&
                same(setDifference(ga, gb), diff));
    g.check("|A&B| + |A-B| = |A|", setIntersect(ga, gb).size() + setDifference(ga, gb).size() == ga.size());

    const auto grid = SparseVoxelGrid::canonicalize(randomCoords(rng, 12000, 64), 64);
    std::vector<std::uint8_t> bits(grid.size());
    for (auto &bit : bits)
        bit = static_cast<std::uint8_t>(rng.below(2));
    const VoxelMask mask = VoxelMask::hard(bits);
    bool roundTrip = true;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Coord> order(grid.coords().begin(), grid.coords().end());
        shuffle(order, rng);
        const AlignmentPermutation perm = hashAlign(grid, order);
        roundTrip = roundTrip && applyPermutation(grid.coords(), perm) == order &&
                    applyPermutation(applyPermutation(mask, perm), perm.inverse()) == mask;
    }
    g.check("hash alignment round-trips shuffled orders", roundTrip);

    std::vector<Coord> bad(grid.coords().begin(), grid.coords().end());
    bad.back() = bad.front();
    bool rejected = false;
    try {
        hashAlign(grid, bad);
    } catch (const Error &e) {
        rejected = e.code() == ErrorCode::AlignmentMismatch;
    }
    g.check("mismatched coordinate multiset is rejected", rejected);
}

void
voxelizerGroup(Group &g, unsigned threads) {
    nlohmann::json mismatches = nlohmann::json::object();
    bool oracleOk = true, closureOk = true;
    for (const Fixture &f : standardFixtures()) {
        for (std::uint32_t r : {8u, 16u}) {
            const bool eq = voxelizeSurface(f.mesh, r, threads) == voxelizeDenseOracle(f.mesh, r);
            oracleOk = oracleOk && eq;
            if (!eq)
                mismatches[f.name + "@" + std::to_string(r)] = true;
        }
        const auto coarse = voxelizeSurface(f.mesh, 16, threads);
        const auto fine = voxelizeSurface(f.mesh, 32, threads);
        for (const Coord &c : fine.coords())
            closureOk = closureOk && coarse.contains({static_cast<std::uint16_t>(c.x / 2),
                                                      static_cast<std::uint16_t>(c.y / 2),
                                                      static_cast<std::uint16_t>(c.z / 2)});
    }
    g.check("binned voxelizer equals dense oracle at R=8,16", oracleOk, mismatches);
    g.check("parent closure 16 -> 32", closureOk);
    g.check("cube shell at R=4 has 56 cells", voxelizeDenseOracle(fixtureByName("cube").mesh, 4).size() == 56);
}

void
anchorGroup(Group &g, unsigned threads, const std::filesystem::path &outDir, std::vector<std::filesystem::path> &artifacts) {
    bool containment = true, recovery = true;
    nlohmann::json ratios = nlohmann::json::object();
    for (const Fixture &f : standardFixtures()) {
        const AnchorResult a = runAnchorPipeline(f.mesh, 16, threads);
        containment = containment && containsAll(a.candidates, a.truth);
        recovery = recovery && applyMask(a.candidates, a.mask) == a.truth;
        ratios[f.name] = a.report.redundancyRatio;
    }
    g.check("upsampled candidates contain the fine voxelization (16 -> 32)", containment);
    g.check("masking candidates recovers the fine voxelization exactly", recovery);
    g.check("redundancy ratios (16 -> 32) are reported", true, ratios);
    g.check("aligned plane redundancy is exactly 0.5",
            redundancyReport(alignedPlaneFixture().mesh, 16, threads).redundancyRatio == 0.5);

    const VoxelMask half = VoxelMask::soft(std::vector<float>(1000, 0.5f));
    g.check("BCE of 0.5 predictions is ln 2",
            std::abs(bceLoss(half, VoxelMask::filled(1000, true)) - std::log(2.0)) <= 1e-9);

    const TriangleMesh sphere = fixtureByName("icosphere3").mesh;
    const AnchorResult a = runAnchorPipeline(sphere, 16, threads);
    const VoxelMask scores = surrogateScores(a.candidates, sphere, std::sqrt(3.0) / 2.0, 50.0);
    const MaskMetrics m = maskMetrics(scores, a.mask, 0.5);
    g.check("surrogate recall > 0.95 on icosphere 16 -> 32", m.recall > 0.95,
            {{"precision", m.precision}, {"recall", m.recall}, {"iou", m.iou}});

    saveGrid(a.truth, outDir / "selftest_icosphere3_v32.svox");
    saveMask(a.mask, outDir / "selftest_icosphere3_gt32.vmsk");
    saveMask(scores, outDir / "selftest_icosphere3_scores32.vmsk");
    artifacts.push_back(outDir / "selftest_icosphere3_v32.svox");
    artifacts.push_back(outDir / "selftest_icosphere3_gt32.vmsk");
    artifacts.push_back(outDir / "selftest_icosphere3_scores32.vmsk");
}

void
partitionGroup(Group &g, SplitMix64 &rng) {
    const CameraModel cam = lookAt({0, 0, -2.5}, {}, {0, -1, 0}, 40.0, 257, 129, 1.0, 4.0);
    bool exact = true;
    for (int n : {1, 2, 3, 4}) {
        std::vector<int> owners(static_cast<std::size_t>(cam.width) * cam.height, 0);
        for (const Tile &t : makeTiles(cam, n, 5))
            for (int y = t.core.y0; y < t.core.y1(); ++y)
                for (int x = t.core.x0; x < t.core.x1(); ++x)
                    ++owners[static_cast<std::size_t>(y) * cam.width + x];
        exact = exact && std::all_of(owners.begin(), owners.end(), [](int o) { return o == 1; });
    }
    g.check("tile cores partition the image", exact);

    const std::vector<Tile> tiles = makeTiles(cam, 3, 7);
    std::size_t disagreements = 0;
    for (int i = 0; i < 20000; ++i) {
        const Tile &t = tiles[rng.below(tiles.size())];
        const Vec3 p{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 2.0)};
        const auto proj = project(cam, p);
        const bool viaProjection = proj && proj->depth >= cam.nearDepth && proj->depth <= cam.farDepth &&
                                   proj->u >= t.expanded.x0 && proj->u <= t.expanded.x1() &&
                                   proj->v >= t.expanded.y0 && proj->v <= t.expanded.y1();
        disagreements += viaProjection != tileFrustum(cam, t).contains(p) ? 1 : 0;
    }
    g.check("frustum inside-test agrees with projection", disagreements == 0, disagreements);
}

void
renderGroup(Group &g, std::uint64_t seed, unsigned threads, const std::filesystem::path &outDir,
            std::vector<std::filesystem::path> &artifacts) {
    const std::vector<CameraModel> cams = seededCameras(seed, 2, 192, 192);
    nlohmann::json cases = nlohmann::json::array();
    bool exact = true;
    const std::vector<Fixture> scenes = stitchScenes();
    for (std::size_t s = 0; s < 2; ++s) {
        const SparseVoxelGrid grid = voxelizeSurface(scenes[s].mesh, 32, threads);
        for (const CameraModel &cam : cams)
            for (int n : {2, 4}) {
                TiledRenderOptions opt;
                opt.gridN = n;
                opt.marginPx = 2;
                opt.splatRadiusPx = 2.0;
                opt.threads = threads;
                const auto c = compareStitched(grid, cam, opt);
                exact = exact && c.differingPixels == 0;
                cases.push_back({{"scene", scenes[s].name}, {"grid", n}, {"differing_pixels", c.differingPixels}});
            }
    }
    g.check("stitched tiles equal the full render", exact, cases);

    const SparseVoxelGrid grid = voxelizeSurface(scenes[0].mesh, 32, threads);
    const RenderImage img = renderFull(grid, cams[0], 2.0);
    const ImageRgb rgb = toImageRgb(img);
    g.check("identical images: L1 = 0, SSIM = 1, PSNR sentinel",
            l1Loss(rgb, rgb) == 0.0 && ssim(rgb, rgb) == 1.0 && psnr(rgb, rgb) >= 99.0);
    writePng(img, outDir / "selftest_render.png");
    artifacts.push_back(outDir / "selftest_render.png");
}

void
membenchGroup(Group &g, std::uint64_t seed, unsigned threads) {
    const std::vector<CameraModel> cams = seededCameras(seed ^ 0x5eedULL, 2, 256, 256);
    const AnchorResult a = runAnchorPipeline(fixtureByName("torus").mesh, 16, threads);
    BenchOptions opt;
    opt.threads = threads;
    const auto rows = benchTable(a, cams, MemoryModel{}, opt);
    nlohmann::json detail = nlohmann::json::array();
    for (const auto &r : rows)
        detail.push_back({{"config", r.config}, {"modeled_bytes", r.modeledBytes}});
    g.check("raw > mask >= mask+2x2 >= mask+4x4",
            rows[0].modeledBytes > rows[1].modeledBytes && rows[1].modeledBytes >= rows[2].modeledBytes &&
                rows[2].modeledBytes >= rows[3].modeledBytes,
            detail);
    const double ratio = static_cast<double>(rows[1].liveVoxels) / static_cast<double>(rows[0].liveVoxels);
    g.check("mask/raw ratio equals 1 - redundancy", std::abs(ratio - (1.0 - a.report.redundancyRatio)) <= 1e-12);
}

} // namespace

SelftestResult
runSelftest(std::uint64_t seed, unsigned threads, const std::filesystem::path &outDir) {
    std::filesystem::create_directories(outDir);
    SelftestResult result;
    SplitMix64 rng(seed);

    std::vector<Group> groups;
    groups.emplace_back("mesh_io").guarded([&](Group &g) { meshGroup(g, outDir); });
    groups.emplace_back("sparse_voxel").guarded([&](Group &g) { sparseGroup(g, rng); });
    groups.emplace_back("voxelizer").guarded([&](Group &g) { voxelizerGroup(g, threads); });
    groups.emplace_back("anchor").guarded([&](Group &g) { anchorGroup(g, threads, outDir, result.artifacts); });
    groups.emplace_back("partition").guarded([&](Group &g) { partitionGroup(g, rng); });
    groups.emplace_back("render").guarded([&](Group &g) { renderGroup(g, seed, threads, outDir, result.artifacts); });
    groups.emplace_back("membench").guarded([&](Group &g) { membenchGroup(g, seed, threads); });

    result.artifacts.insert(result.artifacts.begin(), outDir / "selftest_torus.vmsh");
    result.passed = std::all_of(groups.begin(), groups.end(), [](const Group &g) { return g.passed(); });
    nlohmann::json list = nlohmann::json::array();
    for (const Group &g : groups)
        list.push_back(g.json());
    result.report = {{"seed", seed}, {"passed", result.passed}, {"groups", list}};

    const auto reportPath = outDir / "selftest_report.json";
    std::ofstream out(reportPath);
    out << result.report.dump(2) << '\n';
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + reportPath.string());
    result.artifacts.push_back(reportPath);
    return result;
}

} // namespace voxup
