// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/anchor.h>
#include <voxup/cli.h>
#include <voxup/error.h>
#include <voxup/fixtures.h>
#include <voxup/image_io.h>
#include <voxup/membench.h>
#include <voxup/partition.h>
#include <voxup/render.h>
#include <voxup/selftest.h>
#include <voxup/stitch_check.h>
#include <voxup/voxelizer.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>

namespace voxup {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct GlobalOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string outDir;
};

/// Tracks the files a run touched; turned into the manifest at the end.
class RunContext {
public:
    RunContext(const GlobalOptions &g, std::vector<std::string> args) : mGlobals(g), mArgs(std::move(args)) {}

    const GlobalOptions &globals() const { return mGlobals; }
    fs::path outDir() const { return mGlobals.outDir; }

    fs::path input(const std::string &path) {
        mInputs.push_back(path);
        return path;
    }

    /// Relative output paths land under the output directory.
    fs::path output(const std::string &path) {
        const fs::path p(path);
        const fs::path resolved = p.is_absolute() ? p : outDir() / p;
        if (resolved.has_parent_path())
            fs::create_directories(resolved.parent_path());
        mOutputs.push_back(path);
        return resolved;
    }

    void timing(const std::string &name, Clock::time_point start) {
        mTimings[name] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }

    void writeManifest(const std::string &subcommand) {
        nlohmann::json inputs = nlohmann::json::array();
        for (const std::string &in : mInputs) {
            nlohmann::json entry = {{"path", in}};
            std::error_code ec;
            const auto size = fs::file_size(in, ec);
            if (!ec)
                entry["bytes"] = size;
            inputs.push_back(std::move(entry));
        }
        const nlohmann::json manifest = {{"tool", "voxup"},
                                         {"version", kToolVersion},
                                         {"subcommand", subcommand},
                                         {"args", mArgs},
                                         {"seed", mGlobals.seed},
                                         {"threads", mGlobals.threads},
                                         {"inputs", inputs},
                                         {"outputs", mOutputs},
                                         {"timings", mTimings}};
        fs::create_directories(outDir());
        writeJson(manifest, outDir() / (subcommand + ".manifest.json"));
    }

    static void writeJson(const nlohmann::json &j, const fs::path &path) {
        std::ofstream out(path, std::ios::binary);
        out << j.dump(2) << '\n';
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }

private:
    GlobalOptions mGlobals;
    std::vector<std::string> mArgs;
    std::vector<std::string> mInputs;
    std::vector<std::string> mOutputs;
    nlohmann::json mTimings = nlohmann::json::object();
};

nlohmann::json
readJsonFile(const fs::path &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(fs::exists(path) ? ErrorCode::IoError : ErrorCode::FileNotFound,
                    "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

struct MeshSource {
    std::string path;
    std::string fixture;
    bool noNormalize = false;

    void addOptions(CLI::App *cmd) {
        auto *in = cmd->add_option("--in", path, "Mesh file (.obj or binary .vmsh)");
        auto *fx = cmd->add_option("--fixture", fixture, "Built-in fixture name instead of --in");
        in->excludes(fx);
        cmd->add_flag("--no-normalize", noNormalize, "Require the mesh to already lie in the unit cube");
    }

    nlohmann::json describe;

    TriangleMesh load(RunContext &ctx) {
        if (!fixture.empty()) {
            describe = {{"fixture", fixture}};
            return fixtureByName(fixture).mesh;
        }
        if (path.empty())
            throw Error(ErrorCode::InvalidArgument, "one of --in or --fixture is required");
        MeshLoadReport report;
        TriangleMesh mesh = loadMesh(ctx.input(path), &report);
        describe = {{"path", path},
                    {"triangles", mesh.triangleCount()},
                    {"degenerate_dropped", report.degenerateDropped}};
        if (!noNormalize)
            mesh = normalizeMesh(mesh);
        return mesh;
    }
};

std::vector<CameraModel>
camerasOrSeeded(RunContext &ctx, const std::string &path, std::size_t count, int width, int height) {
    if (!path.empty())
        return loadCameras(ctx.input(path));
    return seededCameras(ctx.globals().seed, count, width, height);
}

nlohmann::json
rectJson(const PixelRect &r) {
    return {r.x0, r.y0, r.w, r.h};
}

std::uint32_t
checkedResolution(int res) {
    if (res <= 0)
        throw Error(ErrorCode::InvalidArgument, "--res must be positive");
    return static_cast<std::uint32_t>(res);
}

using Command = std::function<nlohmann::json(RunContext &)>;

} // namespace

int
runCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"voxup: surface-anchored sparse voxel upsampling and tiled rendering toolkit", "voxup"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GlobalOptions globals;
    if (const char *env = std::getenv("VOXUP_OUT_DIR"); env && *env)
        globals.outDir = env;
    else
        globals.outDir = ".";
    app.add_option("--seed", globals.seed, "Global seed for every random choice");
    app.add_option("--threads", globals.threads, "Worker thread bound")->check(CLI::Range(1u, 256u));
    app.add_option("--out-dir", globals.outDir, "Directory for outputs and manifests (default $VOXUP_OUT_DIR or .)");

    std::map<CLI::App *, Command> commands;
    const auto sub = [&](const std::string &name, const std::string &help) {
        CLI::App *cmd = app.add_subcommand(name, help);
        cmd->fallthrough();
        return cmd;
    };

    // voxelize
    MeshSource voxMesh;
    int voxRes = 0;
    std::string voxOut = "grid.svox";
    bool voxOracle = false;
    {
        CLI::App *cmd = sub("voxelize", "Conservative surface voxelization of a mesh");
        voxMesh.addOptions(cmd);
        cmd->add_option("--res", voxRes, "Grid resolution (power of two, 4..1024)")->required();
        cmd->add_option("--out", voxOut, "Output grid (.svox)");
        cmd->add_flag("--oracle", voxOracle, "Use the dense reference voxelizer");
        commands[cmd] = [&](RunContext &ctx) {
            const TriangleMesh mesh = voxMesh.load(ctx);
            const std::uint32_t r = checkedResolution(voxRes);
            const auto t0 = Clock::now();
            const SparseVoxelGrid grid =
                voxOracle ? voxelizeDenseOracle(mesh, r) : voxelizeSurface(mesh, r, ctx.globals().threads);
            ctx.timing("voxelize_ms", t0);
            saveGrid(grid, ctx.output(voxOut));
            return nlohmann::json{{"mesh", voxMesh.describe},
                                  {"resolution", r},
                                  {"voxels", grid.size()},
                                  {"oracle", voxOracle},
                                  {"out", voxOut}};
        };
    }

    // upsample
    std::string upIn, upOut = "upsampled.svox";
    {
        CLI::App *cmd = sub("upsample", "Replace every voxel with its 8 children");
        cmd->add_option("--in", upIn, "Input grid (.svox)")->required();
        cmd->add_option("--out", upOut, "Output grid (.svox)");
        commands[cmd] = [&](RunContext &ctx) {
            const SparseVoxelGrid grid = loadGrid(ctx.input(upIn));
            const SparseVoxelGrid up = upsampleTraditional(grid);
            saveGrid(up, ctx.output(upOut));
            return nlohmann::json{{"resolution", up.resolution()},
                                  {"parent_count", grid.size()},
                                  {"candidate_count", up.size()},
                                  {"out", upOut}};
        };
    }

    // anchor
    MeshSource anchorMesh;
    int anchorRes = 0;
    std::string anchorReport = "anchor_report.json", anchorMaskOut, anchorPruned, anchorCandidates;
    bool anchorSurrogate = false;
    double anchorTau = std::sqrt(3.0) / 2.0, anchorBeta = 50.0;
    {
        CLI::App *cmd = sub("anchor", "Upsample, build the ground-truth anchoring mask and redundancy report");
        anchorMesh.addOptions(cmd);
        cmd->add_option("--res", anchorRes, "Coarse resolution R (the fine level is 2R)")->required();
        cmd->add_option("--report", anchorReport, "Report JSON");
        cmd->add_option("--mask", anchorMaskOut, "Ground-truth mask over the candidates (.vmsk)");
        cmd->add_option("--pruned", anchorPruned, "Masked candidate grid (.svox)");
        cmd->add_option("--candidates", anchorCandidates, "Unmasked candidate grid (.svox)");
        cmd->add_flag("--surrogate", anchorSurrogate, "Also evaluate the distance-logistic surrogate scorer");
        cmd->add_option("--tau", anchorTau, "Surrogate distance threshold in fine cells");
        cmd->add_option("--beta", anchorBeta, "Surrogate logistic slope");
        commands[cmd] = [&](RunContext &ctx) {
            const TriangleMesh mesh = anchorMesh.load(ctx);
            const auto t0 = Clock::now();
            const AnchorResult a = runAnchorPipeline(mesh, checkedResolution(anchorRes), ctx.globals().threads);
            nlohmann::json timings = {
                {"pipeline_ms", std::chrono::duration<double, std::milli>(Clock::now() - t0).count()}};
            nlohmann::json report = {{"mesh", anchorMesh.describe},
                                     {"resolution", a.coarse.resolution()},
                                     {"fine_resolution", a.truth.resolution()},
                                     {"parent_count", a.report.parentCount},
                                     {"candidate_count", a.report.candidateCount},
                                     {"surface_count", a.report.surfaceCount},
                                     {"redundancy_ratio", a.report.redundancyRatio}};
            if (anchorSurrogate) {
                const auto t1 = Clock::now();
                const VoxelMask scores = surrogateScores(a.candidates, mesh, anchorTau, anchorBeta);
                const MaskMetrics m = maskMetrics(scores, a.mask);
                timings["surrogate_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - t1).count();
                report["surrogate"] = {{"tau", anchorTau},         {"beta", anchorBeta},
                                       {"bce", bceLoss(scores, a.mask)}, {"precision", m.precision},
                                       {"recall", m.recall},       {"iou", m.iou}};
            }
            report["timings"] = timings;
            if (!anchorMaskOut.empty())
                saveMask(a.mask, ctx.output(anchorMaskOut));
            if (!anchorPruned.empty())
                saveGrid(applyMask(a.candidates, a.mask), ctx.output(anchorPruned));
            if (!anchorCandidates.empty())
                saveGrid(a.candidates, ctx.output(anchorCandidates));
            RunContext::writeJson(report, ctx.output(anchorReport));
            report.erase("timings");
            return report;
        };
    }

    // partition
    int partGrid = 2, partMargin = 3, partSteps = 0;
    double partRadius = -1.0;
    std::string partIn, partCamera, partStats = "tiles.json";
    bool partForeground = false;
    int camWidth = 512, camHeight = 512;
    {
        CLI::App *cmd = sub("partition", "Tile an image and cull a grid against every tile frustum");
        cmd->add_option("--grid", partGrid, "Tiles per side")->check(CLI::PositiveNumber);
        cmd->add_option("--margin", partMargin, "Tile overlap margin in pixels")->check(CLI::NonNegativeNumber);
        cmd->add_option("--splat-radius", partRadius, "Splat radius in pixels driving the world margin (default: margin)");
        cmd->add_option("--camera", partCamera, "Camera JSON (default: seeded orbit camera)");
        cmd->add_option("--width", camWidth, "Seeded camera width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", camHeight, "Seeded camera height")->check(CLI::PositiveNumber);
        cmd->add_option("--in", partIn, "Grid (.svox)")->required();
        cmd->add_option("--stats", partStats, "Per-tile statistics JSON");
        cmd->add_flag("--foreground", partForeground, "Restrict tiles to the projected bounding box of the grid");
        cmd->add_option("--sample-steps", partSteps, "Also list this many seeded tile samples")
            ->check(CLI::NonNegativeNumber);
        commands[cmd] = [&](RunContext &ctx) {
            const SparseVoxelGrid grid = loadGrid(ctx.input(partIn));
            const CameraModel cam = camerasOrSeeded(ctx, partCamera, 1, camWidth, camHeight).front();
            std::optional<PixelRect> region;
            if (partForeground)
                region = foregroundRegion(grid, cam);
            const std::vector<Tile> tiles = makeTiles(cam, partGrid, partMargin, region);
            const double worldMargin = splatWorldMargin(cam, partRadius >= 0.0 ? partRadius : partMargin);
            const double voxelSize = 1.0 / grid.resolution();
            const std::size_t global = cullVoxels(grid, cameraFrustum(cam), voxelSize).keptCount;

            nlohmann::json list = nlohmann::json::array();
            std::size_t peak = 0;
            for (std::size_t i = 0; i < tiles.size(); ++i) {
                const std::size_t kept = cullVoxels(grid, tileFrustum(cam, tiles[i], worldMargin), voxelSize).keptCount;
                peak = std::max(peak, kept);
                list.push_back({{"index", i},
                                {"core", rectJson(tiles[i].core)},
                                {"expanded", rectJson(tiles[i].expanded)},
                                {"kept_voxels", kept}});
            }
            nlohmann::json samples = nlohmann::json::array();
            for (int s = 0; s < partSteps; ++s)
                samples.push_back(sampleTileIndex(tiles.size(), ctx.globals().seed, static_cast<std::uint64_t>(s)));
            const nlohmann::json stats = {{"grid", partGrid},
                                          {"margin_px", partMargin},
                                          {"world_margin", worldMargin},
                                          {"camera", cameraToJson(cam)},
                                          {"total_voxels", grid.size()},
                                          {"global_kept_voxels", global},
                                          {"max_tile_kept_voxels", peak},
                                          {"tiles", list},
                                          {"samples", samples}};
            RunContext::writeJson(stats, ctx.output(partStats));
            return nlohmann::json{{"tiles", tiles.size()},
                                  {"total_voxels", grid.size()},
                                  {"global_kept_voxels", global},
                                  {"max_tile_kept_voxels", peak}};
        };
    }

    // render
    std::string renderIn, renderCamera, renderOut = "render.png";
    double renderRadius = 3.0;
    int renderTileIndex = -1, renderGrid = 2, renderMargin = 3, renderCameraIndex = 0;
    {
        CLI::App *cmd = sub("render", "Splat-render a grid, optionally a single culled tile");
        cmd->add_option("--in", renderIn, "Grid (.svox)")->required();
        cmd->add_option("--camera", renderCamera, "Camera JSON (default: seeded orbit camera)");
        cmd->add_option("--camera-index", renderCameraIndex, "Camera to use when the JSON holds several")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--width", camWidth, "Seeded camera width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", camHeight, "Seeded camera height")->check(CLI::PositiveNumber);
        cmd->add_option("--out", renderOut, "Image (.png or .ppm)");
        cmd->add_option("--radius", renderRadius, "Splat radius in pixels");
        cmd->add_option("--tile", renderTileIndex, "Render only this tile (row-major index)");
        cmd->add_option("--grid", renderGrid, "Tiles per side for --tile")->check(CLI::PositiveNumber);
        cmd->add_option("--margin", renderMargin, "Tile margin in pixels for --tile")->check(CLI::NonNegativeNumber);
        commands[cmd] = [&](RunContext &ctx) {
            const SparseVoxelGrid grid = loadGrid(ctx.input(renderIn));
            const std::vector<CameraModel> cams =
                camerasOrSeeded(ctx, renderCamera, static_cast<std::size_t>(renderCameraIndex) + 1, camWidth, camHeight);
            if (static_cast<std::size_t>(renderCameraIndex) >= cams.size())
                throw Error(ErrorCode::OutOfRange, "--camera-index beyond the cameras in the file");
            const CameraModel &cam = cams[static_cast<std::size_t>(renderCameraIndex)];
            RenderImage img;
            nlohmann::json summary;
            if (renderTileIndex >= 0) {
                const std::vector<Tile> tiles = makeTiles(cam, renderGrid, renderMargin);
                if (static_cast<std::size_t>(renderTileIndex) >= tiles.size())
                    throw Error(ErrorCode::OutOfRange, "--tile index beyond the tiling");
                const Tile &tile = tiles[static_cast<std::size_t>(renderTileIndex)];
                const CullResult culled =
                    cullVoxels(grid, tileFrustum(cam, tile, splatWorldMargin(cam, renderMargin)), 0.0);
                img = renderTile(culled.kept, cam, tile, renderRadius);
                summary = {{"tile", renderTileIndex}, {"expanded", rectJson(tile.expanded)}, {"kept_voxels", culled.keptCount}};
            } else {
                img = renderFull(grid, cam, renderRadius);
            }
            writeImage(img, ctx.output(renderOut));
            summary["width"] = img.width;
            summary["height"] = img.height;
            summary["covered_pixels"] = img.coveredPixels();
            summary["out"] = renderOut;
            return summary;
        };
    }

    // stitch-check
    std::vector<int> scGrids;
    int scMargin = 3, scRes = 64, scCameraCount = 8;
    double scRadius = 3.0;
    std::string scScenes, scCameras, scReport = "stitch_check.json";
    bool scNegative = false;
    {
        CLI::App *cmd = sub("stitch-check", "Compare stitched tile renders with full renders");
        cmd->add_option("--grid", scGrids, "Tiling(s) to check (repeatable; default 2 and 4)")->check(CLI::PositiveNumber);
        cmd->add_option("--margin", scMargin, "Tile margin in pixels")->check(CLI::NonNegativeNumber);
        cmd->add_option("--radius", scRadius, "Splat radius in pixels");
        cmd->add_option("--scenes", scScenes, "Directory of .svox grids or meshes (default: built-in scenes)");
        cmd->add_option("--res", scRes, "Resolution for voxelizing mesh scenes");
        cmd->add_option("--cameras", scCameras, "Camera JSON (default: seeded orbit cameras)");
        cmd->add_option("--num-cameras", scCameraCount, "Seeded camera count")->check(CLI::PositiveNumber);
        cmd->add_option("--width", camWidth, "Seeded camera width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", camHeight, "Seeded camera height")->check(CLI::PositiveNumber);
        cmd->add_option("--report", scReport, "Report JSON");
        cmd->add_flag("--expect-differences", scNegative,
                      "Negative control: succeed only if some case differs (use with an undersized margin)");
        commands[cmd] = [&](RunContext &ctx) {
            const std::uint32_t r = checkedResolution(scRes);
            std::vector<NamedGrid> scenes;
            if (scScenes.empty()) {
                for (const Fixture &f : stitchScenes())
                    scenes.push_back({f.name, voxelizeSurface(f.mesh, r, ctx.globals().threads)});
            } else {
                const fs::path dir = ctx.input(scScenes);
                if (!fs::is_directory(dir))
                    throw Error(ErrorCode::FileNotFound, "scene directory not found: " + dir.string());
                std::vector<fs::path> files;
                for (const auto &entry : fs::directory_iterator(dir))
                    if (entry.is_regular_file())
                        files.push_back(entry.path());
                std::sort(files.begin(), files.end());
                for (const fs::path &f : files) {
                    const std::string ext = f.extension().string();
                    if (ext == ".svox")
                        scenes.push_back({f.stem().string(), loadGrid(f)});
                    else if (ext == ".obj" || ext == ".vmsh")
                        scenes.push_back({f.stem().string(),
                                          voxelizeSurface(normalizeMesh(loadMesh(f)), r, ctx.globals().threads)});
                }
                if (scenes.empty())
                    throw Error(ErrorCode::InvalidArgument, "no .svox/.obj/.vmsh scenes in " + dir.string());
            }
            const std::vector<CameraModel> cams =
                camerasOrSeeded(ctx, scCameras, static_cast<std::size_t>(scCameraCount), camWidth, camHeight);
            TiledRenderOptions base;
            base.marginPx = scMargin;
            base.splatRadiusPx = scRadius;
            base.threads = ctx.globals().threads;
            const std::vector<int> tilings = scGrids.empty() ? std::vector<int>{2, 4} : scGrids;
            const auto t0 = Clock::now();
            nlohmann::json report = stitchCheckReport(scenes, cams, tilings, base);
            ctx.timing("stitch_check_ms", t0);
            RunContext::writeJson(report, ctx.output(scReport));
            const bool allExact = report["all_exact"].get<bool>();
            if (scNegative ? allExact : !allExact)
                throw Error(ErrorCode::CoverageError,
                            scNegative ? "negative control produced no differing pixels"
                                       : "stitched renders differ from full renders; see " + scReport);
            return nlohmann::json{{"cases", report["case_count"]},
                                  {"exact_cases", report["exact_cases"]},
                                  {"all_exact", allExact}};
        };
    }

    // bench
    MeshSource benchMesh;
    int benchRes = 0, benchCameraCount = 4, benchMargin = 3;
    double benchRadius = 3.0;
    std::string benchCameras, benchModel, benchOut = "bench.json", benchCsv;
    {
        CLI::App *cmd = sub("bench", "Modeled memory for raw / mask / mask+block configurations");
        benchMesh.addOptions(cmd);
        cmd->add_option("--res", benchRes, "Coarse resolution R")->required();
        cmd->add_option("--cameras", benchCameras, "Camera JSON (default: seeded orbit cameras)");
        cmd->add_option("--num-cameras", benchCameraCount, "Seeded camera count")->check(CLI::PositiveNumber);
        cmd->add_option("--width", camWidth, "Seeded camera width")->check(CLI::PositiveNumber);
        cmd->add_option("--height", camHeight, "Seeded camera height")->check(CLI::PositiveNumber);
        cmd->add_option("--model", benchModel, "Memory model JSON");
        cmd->add_option("--radius", benchRadius, "Splat radius in pixels");
        cmd->add_option("--margin", benchMargin, "Tile margin in pixels")->check(CLI::NonNegativeNumber);
        cmd->add_option("--out", benchOut, "Table JSON");
        cmd->add_option("--csv", benchCsv, "Also write the table as CSV");
        commands[cmd] = [&](RunContext &ctx) {
            const TriangleMesh mesh = benchMesh.load(ctx);
            const MemoryModel model = benchModel.empty() ? MemoryModel{} : memoryModelFromJson(readJsonFile(ctx.input(benchModel)));
            const std::vector<CameraModel> cams =
                camerasOrSeeded(ctx, benchCameras, static_cast<std::size_t>(benchCameraCount), camWidth, camHeight);
            const AnchorResult a = runAnchorPipeline(mesh, checkedResolution(benchRes), ctx.globals().threads);
            BenchOptions opt;
            opt.splatRadiusPx = benchRadius;
            opt.marginPx = benchMargin;
            opt.threads = ctx.globals().threads;
            const std::vector<ConfigReport> rows = benchTable(a, cams, model, opt);
            nlohmann::json table = benchTableToJson(rows, a, model);
            table["mesh"] = benchMesh.describe;
            RunContext::writeJson(table, ctx.output(benchOut));
            if (!benchCsv.empty()) {
                std::ofstream csv(ctx.output(benchCsv), std::ios::binary);
                csv << benchTableToCsv(rows);
                if (!csv)
                    throw Error(ErrorCode::IoError, "cannot write " + benchCsv);
            }
            return table;
        };
    }

    // selftest
    {
        CLI::App *cmd = sub("selftest", "Run the invariant suite on the bundled primitives");
        commands[cmd] = [&](RunContext &ctx) {
            const SelftestResult r = runSelftest(ctx.globals().seed, ctx.globals().threads, ctx.outDir());
            nlohmann::json groups = nlohmann::json::object();
            for (const auto &g : r.report["groups"])
                groups[g["name"].get<std::string>()] = g["passed"];
            for (const fs::path &p : r.artifacts)
                ctx.output(fs::relative(p, ctx.outDir()).string());
            if (!r.passed)
                throw Error(ErrorCode::CoverageError, "selftest failed: " + groups.dump());
            return nlohmann::json{{"passed", true}, {"groups", groups}};
        };
    }

    std::vector<std::string> argvStrings;
    argvStrings.reserve(args.size() + 1);
    argvStrings.push_back("voxup");
    argvStrings.insert(argvStrings.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const std::string &s : argvStrings)
        argv.push_back(s.c_str());

    const auto emitError = [&](std::string_view code, const std::string &message) {
        err << nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
    };

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        emitError("USAGE_ERROR", e.what());
        return 2;
    }

    for (const auto &[cmd, run] : commands) {
        if (!cmd->parsed())
            continue;
        try {
            RunContext ctx(globals, args);
            const auto t0 = Clock::now();
            const nlohmann::json summary = run(ctx);
            ctx.timing("total_ms", t0);
            ctx.writeManifest(cmd->get_name());
            out << summary.dump() << '\n';
            return 0;
        } catch (const Error &e) {
            emitError(errorCodeName(e.code()), e.what());
        } catch (const fs::filesystem_error &e) {
            emitError(errorCodeName(ErrorCode::IoError), e.what());
        } catch (const std::exception &e) {
            emitError("INTERNAL_ERROR", e.what());
        }
        return 1;
    }
    emitError("USAGE_ERROR", "no subcommand");
    return 2;
}

} // namespace voxup
