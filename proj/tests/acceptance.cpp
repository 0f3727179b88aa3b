// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <voxup/anchor.h>
#include <voxup/cli.h>
#include <voxup/error.h>
#include <voxup/fixtures.h>
#include <voxup/image_metrics.h>
#include <voxup/membench.h>
#include <voxup/stitch_check.h>
#include <voxup/voxelizer.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace voxup;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double
secondsSince(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool passed = false;
    std::string detail;
};

int failures = 0;

void
report(int id, const std::string &name, const Outcome &o) {
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << std::endl;
    failures += o.passed ? 0 : 1;
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> body;
};

std::vector<Criterion> registry;

void
criterion(int id, const std::string &name, std::function<Outcome()> body) {
    registry.push_back({id, name, std::move(body)});
}

void
runCriterion(const Criterion &c) {
    Outcome o;
    try {
        o = c.body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    report(c.id, c.name, o);
}

std::string
fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::setprecision(precision) << std::fixed << v;
    return s.str();
}

Coord
parentOf(const Coord &c) {
    return {static_cast<std::uint16_t>(c.x / 2), static_cast<std::uint16_t>(c.y / 2), static_cast<std::uint16_t>(c.z / 2)};
}

// Shared between criteria 1 and 2.
struct ChainResult {
    std::string fixture;
    std::uint32_t resolution;
    std::size_t violations;
    bool recovered;
};

std::vector<ChainResult>
runChains(double &seconds) {
    const auto t0 = Clock::now();
    std::vector<ChainResult> out;
    for (const Fixture &f : standardFixtures()) {
        for (std::uint32_t r : {8u, 16u, 32u, 64u}) {
            const SparseVoxelGrid coarse = voxelizeSurface(f.mesh, r);
            const SparseVoxelGrid candidates = upsampleTraditional(coarse);
            const SparseVoxelGrid truth = voxelizeSurface(f.mesh, 2 * r);
            const std::size_t violations = missingFrom(candidates, truth).size();
            bool recovered = false;
            if (violations == 0)
                recovered = applyMask(candidates, gtMask(candidates, truth)) == truth;
            out.push_back({f.name, r, violations, recovered});
        }
    }
    seconds = secondsSince(t0);
    return out;
}

double
directSsim(const ImageRgb &a, const ImageRgb &b) {
    const int half = 5;
    double g[11][11], total = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            total += g[i][j] = std::exp(-((i - half) * (i - half) + (j - half) * (j - half)) / 4.5);
    double sum = 0.0;
    std::size_t n = 0;
    for (int c = 0; c < 3; ++c)
        for (int y = half; y < a.height - half; ++y)
            for (int x = half; x < a.width - half; ++x) {
                double mx = 0, my = 0, vx = 0, vy = 0, cov = 0;
                for (int i = 0; i < 11; ++i)
                    for (int j = 0; j < 11; ++j) {
                        mx += g[i][j] / total * a.at(x + j - half, y + i - half, c);
                        my += g[i][j] / total * b.at(x + j - half, y + i - half, c);
                    }
                for (int i = 0; i < 11; ++i)
                    for (int j = 0; j < 11; ++j) {
                        const double dx = a.at(x + j - half, y + i - half, c) - mx;
                        const double dy = b.at(x + j - half, y + i - half, c) - my;
                        vx += g[i][j] / total * dx * dx;
                        vy += g[i][j] / total * dy * dy;
                        cov += g[i][j] / total * dx * dy;
                    }
                sum += ((2 * mx * my + 1e-4) * (2 * cov + 9e-4)) / ((mx * mx + my * my + 1e-4) * (vx + vy + 9e-4));
                ++n;
            }
    return sum / static_cast<double>(n);
}

std::map<std::string, std::string>
snapshot(const fs::path &dir) {
    std::map<std::string, std::string> files;
    for (const auto &e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file())
            continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        if (e.path().filename().string().ends_with(".manifest.json")) {
            auto j = nlohmann::json::parse(bytes);
            j.erase("timings");
            bytes = j.dump();
        }
        files[e.path().filename().string()] = std::move(bytes);
    }
    return files;
}

} // namespace

int
main(int argc, char **argv) {
    const auto suiteStart = Clock::now();

    // Criteria 1 and 2 share the voxelization chains; computed on first use.
    double chainSeconds = 0.0;
    std::vector<ChainResult> chains;
    bool chainsReady = false;
    const auto ensureChains = [&] {
        if (!chainsReady)
            chains = runChains(chainSeconds);
        chainsReady = true;
    };

    criterion(1, "containment of V_2R in upsample(V_R), 10 fixtures x R in {8,16,32,64}", [&] {
        ensureChains();
        std::size_t total = 0;
        std::string worst;
        for (const auto &c : chains) {
            total += c.violations;
            if (c.violations)
                worst += " " + c.fixture + "@" + std::to_string(c.resolution);
        }
        const bool ok = chains.size() >= 40 && total == 0 && chainSeconds < 120.0;
        return Outcome{ok, std::to_string(chains.size()) + " chains, " + std::to_string(total) + " violations," +
                               worst + " runtime " + fmt(chainSeconds, 2) + " s (limit 120 s)"};
    });

    criterion(2, "exact mask recovery apply_mask(candidates, gt_mask) == V_2R", [&] {
        ensureChains();
        std::size_t ok = 0;
        for (const auto &c : chains)
            ok += c.recovered ? 1 : 0;
        return Outcome{!chains.empty() && ok == chains.size(),
                       std::to_string(ok) + "/" + std::to_string(chains.size()) + " exact"};
    });

    criterion(3, "redundancy ratio band 64->128 on closed fixtures, aligned plane exactly 0.5", [&] {
        const auto t0 = Clock::now();
        bool ok = true;
        std::string detail;
        for (const Fixture &f : standardFixtures()) {
            const double ratio = redundancyReport(f.mesh, 64).redundancyRatio;
            const bool inBand = ratio >= 0.50 && ratio <= 0.80;
            if (f.closed)
                ok = ok && inBand;
            detail += f.name + "=" + fmt(ratio) + (f.closed ? (inBand ? "" : "(out of band)") : "(open, reported)") + " ";
        }
        const double plane = redundancyReport(alignedPlaneFixture().mesh, 64).redundancyRatio;
        const double seconds = secondsSince(t0);
        ok = ok && plane == 0.5 && seconds < 60.0;
        return Outcome{ok, detail + "aligned_plane=" + fmt(plane, 6) + " (published dataset-level figure ~0.70 is reported, not asserted)" +
                               " runtime " + fmt(seconds, 2) + " s (limit 60 s)"};
    });

    criterion(4, "voxelize_surface == voxelize_dense_oracle for all fixtures at R <= 16", [&] {
        std::size_t cases = 0, equal = 0;
        std::vector<Fixture> all = standardFixtures();
        all.push_back(alignedPlaneFixture());
        for (const Fixture &f : all)
            for (std::uint32_t r : {4u, 8u, 16u}) {
                ++cases;
                equal += voxelizeSurface(f.mesh, r) == voxelizeDenseOracle(f.mesh, r) ? 1 : 0;
            }
        return Outcome{equal == cases, std::to_string(equal) + "/" + std::to_string(cases) + " identical"};
    });

    criterion(5, "alignment round-trip over 100 shuffles, mismatches always rejected", [&] {
        const AnchorResult a = runAnchorPipeline(fixtureByName("torus").mesh, 32);
        const SparseVoxelGrid &grid = a.candidates;
        SplitMix64 rng(0xa11c);
        std::size_t exact = 0, rejected = 0, mismatchTrials = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Coord> order(grid.coords().begin(), grid.coords().end());
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng.below(i)]);
            const VoxelMask shuffled = gtMaskForOrder(order, a.truth);
            const AlignmentPermutation pi = hashAlign(grid, order);
            exact += applyPermutation(shuffled, pi.inverse()) == a.mask ? 1 : 0;

            std::vector<std::vector<Coord>> bad(3, order);
            bad[0].pop_back();                                  // size mismatch
            bad[1][rng.below(order.size())] = {0, 0, 0};         // coordinate outside the set (corner is empty)
            bad[2][0] = bad[2][1 + rng.below(order.size() - 1)]; // duplicate
            for (const auto &b : bad) {
                ++mismatchTrials;
                try {
                    hashAlign(grid, b);
                } catch (const Error &e) {
                    rejected += e.code() == ErrorCode::AlignmentMismatch ? 1 : 0;
                }
            }
        }
        const bool ok = grid.size() >= 10000 && !grid.contains({0, 0, 0}) && exact == 100 && rejected == mismatchTrials;
        return Outcome{ok, "grid of " + std::to_string(grid.size()) + " coords, " + std::to_string(exact) +
                               "/100 bit-exact, " + std::to_string(rejected) + "/" + std::to_string(mismatchTrials) +
                               " mismatches rejected"};
    });

    criterion(6, "tile-stitch exactness 6 scenes x 8 cameras x {2x2,4x4} at 512x512, margin-0 negative control", [&] {
        const auto t0 = Clock::now();
        std::vector<NamedGrid> scenes;
        for (const Fixture &f : stitchScenes())
            scenes.push_back({f.name, voxelizeSurface(f.mesh, 64)});
        const std::vector<CameraModel> cams = seededCameras(0x5717c4, 8, 512, 512);
        TiledRenderOptions base;
        base.marginPx = 3;
        base.splatRadiusPx = 3.0;
        std::size_t cases = 0, exact = 0, pairs = 0;
        std::map<int, std::size_t> negDiffering;
        std::size_t pairsAnyDiffering = 0;
        for (const NamedGrid &s : scenes)
            for (const CameraModel &cam : cams) {
                ++pairs;
                bool anyDiff = false;
                for (int n : {2, 4}) {
                    TiledRenderOptions opt = base;
                    opt.gridN = n;
                    ++cases;
                    exact += compareStitched(s.grid, cam, opt).differingPixels == 0 ? 1 : 0;
                    opt.marginPx = 0;
                    const bool differs = compareStitched(s.grid, cam, opt).differingPixels > 0;
                    negDiffering[n] += differs ? 1 : 0;
                    anyDiff = anyDiff || differs;
                }
                pairsAnyDiffering += anyDiff ? 1 : 0;
            }
        const double seconds = secondsSince(t0);
        const double frac2 = static_cast<double>(negDiffering[2]) / pairs;
        const double frac4 = static_cast<double>(negDiffering[4]) / pairs;
        const bool ok = exact == cases && cases == 96 && frac2 >= 0.9 && frac4 >= 0.9 && seconds < 300.0;
        return Outcome{ok, std::to_string(exact) + "/" + std::to_string(cases) + " exact; negative control differs on " +
                               fmt(100 * frac2, 1) + "% (2x2), " + fmt(100 * frac4, 1) + "% (4x4), " +
                               std::to_string(pairsAnyDiffering) + "/" + std::to_string(pairs) +
                               " pairs in either tiling; runtime " + fmt(seconds, 2) + " s (limit 300 s)"};
    });

    criterion(7, "memory-model ordering raw >= mask >= mask+2x2 >= mask+4x4, mask/raw = 1 - redundancy", [&] {
        const std::vector<CameraModel> cams = seededCameras(0xbe7c4, 8, 512, 512);
        std::size_t scenes = 0, ordered = 0, ratioOk = 0;
        double worstRatioError = 0.0;
        std::string sphereRatios;
        for (const Fixture &f : standardFixtures()) {
            const std::uint32_t r = 32;
            const AnchorResult a = runAnchorPipeline(f.mesh, r);
            const auto rows = benchTable(a, cams, MemoryModel{});
            ++scenes;
            const bool strictFirst = a.report.redundancyRatio > 0 ? rows[0].modeledBytes > rows[1].modeledBytes
                                                                  : rows[0].modeledBytes >= rows[1].modeledBytes;
            ordered += strictFirst && rows[1].modeledBytes >= rows[2].modeledBytes &&
                               rows[2].modeledBytes >= rows[3].modeledBytes
                           ? 1
                           : 0;
            const double ratio = static_cast<double>(rows[1].liveVoxels) / static_cast<double>(rows[0].liveVoxels);
            const double err = std::abs(ratio - (1.0 - a.report.redundancyRatio));
            worstRatioError = std::max(worstRatioError, err);
            ratioOk += err <= 1e-12 ? 1 : 0;
        }
        for (const char *name : {"icosphere2", "icosphere3"}) {
            const AnchorResult a = runAnchorPipeline(fixtureByName(name).mesh, 64);
            sphereRatios += std::string(" ") + name + " mask/raw@64->128=" +
                            fmt(static_cast<double>(a.truth.size()) / a.candidates.size());
        }
        return Outcome{ordered == scenes && ratioOk == scenes,
                       std::to_string(ordered) + "/" + std::to_string(scenes) + " scenes ordered, ratio error max " +
                           fmt(worstRatioError * 1e12, 3) + "e-12;" + sphereRatios};
    });

    criterion(8, "loss correctness: BCE ln 2, BCE monotonicity, SSIM/L1 identities, reference formulas", [&] {
        const double bceHalf = bceLoss(VoxelMask::soft(std::vector<float>(1000, 0.5f)),
                                       VoxelMask::hard(std::vector<std::uint8_t>(1000, 1)));
        const bool lnOk = std::abs(bceHalf - std::log(2.0)) <= 1e-9;

        SplitMix64 rng(0x1055);
        std::vector<float> p(64);
        std::vector<std::uint8_t> t(64);
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = static_cast<float>(rng.uniform(0.02, 0.98));
            t[i] = static_cast<std::uint8_t>(rng.below(2));
        }
        const VoxelMask target = VoxelMask::hard(t);
        const double base = bceLoss(VoxelMask::soft(p), target);
        std::size_t monotone = 0;
        for (int k = 0; k < 1000; ++k) {
            std::vector<float> q = p;
            const std::size_t i = rng.below(q.size());
            q[i] = static_cast<float>(q[i] + ((t[i] ? 1.0 : 0.0) - q[i]) * rng.uniform(0.01, 0.99));
            monotone += bceLoss(VoxelMask::soft(q), target) < base ? 1 : 0;
        }

        bool identities = true;
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            ImageRgb a(64, 64), b(64, 64);
            for (double &v : a.data)
                v = rng.nextDouble();
            for (std::size_t i = 0; i < b.data.size(); ++i)
                b.data[i] = 0.5 * a.data[i] + 0.5 * rng.nextDouble();
            identities = identities && ssim(a, a) == 1.0 && l1Loss(a, a) == 0.0 && psnr(a, a) >= 99.0;
            double l1 = 0.0, mse = 0.0;
            for (std::size_t i = 0; i < a.data.size(); ++i) {
                l1 += std::abs(a.data[i] - b.data[i]);
                mse += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
            }
            l1 /= a.data.size();
            mse /= a.data.size();
            worst = std::max({worst, std::abs(ssim(a, b) - directSsim(a, b)), std::abs(l1Loss(a, b) - l1),
                              std::abs(psnr(a, b) + 10.0 * std::log10(mse))});
        }
        const bool ok = lnOk && monotone == 1000 && identities && worst <= 1e-6;
        return Outcome{ok, "BCE(0.5)-ln2=" + fmt(bceHalf - std::log(2.0), 12) + ", monotone " +
                               std::to_string(monotone) + "/1000, identities " + (identities ? "exact" : "broken") +
                               ", max reference deviation " + fmt(worst * 1e9, 3) + "e-9"};
    });

    criterion(9, "surrogate recall > 0.95 on icosphere 16->32 (beta 50, tau half cell diagonal)", [&] {
        const TriangleMesh sphere = fixtureByName("icosphere3").mesh;
        const AnchorResult a = runAnchorPipeline(sphere, 16);
        const MaskMetrics m = maskMetrics(surrogateScores(a.candidates, sphere, std::sqrt(3.0) / 2.0, 50.0), a.mask);
        return Outcome{m.recall > 0.95, "recall=" + fmt(m.recall) + " precision=" + fmt(m.precision) +
                                            " iou=" + fmt(m.iou)};
    });

    criterion(10, "selftest twice with the same seed yields byte-identical artifacts", [&] {
        const fs::path dir = fs::path(VOXUP_TEST_TMP) / "determinism";
        fs::remove_all(dir);
        std::ostringstream out, err;
        const std::vector<std::string> args{"--out-dir", dir.string(), "--seed", "1234", "selftest"};
        const int first = runCli(args, out, err);
        const auto a = snapshot(dir);
        const int second = runCli(args, out, err);
        const auto b = snapshot(dir);
        std::size_t differing = 0;
        for (const auto &[name, bytes] : a)
            differing += (!b.count(name) || b.at(name) != bytes) ? 1 : 0;
        const bool ok = first == 0 && second == 0 && a.size() == b.size() && a.size() >= 5 && differing == 0;
        return Outcome{ok, std::to_string(a.size()) + " artifacts, " + std::to_string(differing) +
                               " differing, exit codes " + std::to_string(first) + "/" + std::to_string(second) +
                               (first ? " " + err.str() : "")};
    });

    // Optional arguments select criteria by number; default runs all.
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));
    std::size_t ran = 0;
    for (const Criterion &c : registry) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        runCriterion(c);
        ++ran;
    }
    if (ran == 0) {
        std::cerr << "no such criterion\n";
        return 2;
    }
    std::cout << "SUMMARY " << (ran - failures) << "/" << ran << " criteria passed in "
              << fmt(secondsSince(suiteStart), 1) << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
