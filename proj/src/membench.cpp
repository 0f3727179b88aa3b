// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/membench.h>
#include <voxup/partition.h>

#include <algorithm>
#include <sstream>

namespace voxup {

std::string
BenchConfig::name() const {
    switch (kind) {
    case Kind::Raw: return "raw";
    case Kind::Mask: return "mask";
    case Kind::MaskBlock: return "mask+block" + std::to_string(blockN) + "x" + std::to_string(blockN);
    }
    return "unknown";
}

MemoryModel
memoryModelFromJson(const nlohmann::json &j) {
    if (!j.is_object())
        throw Error(ErrorCode::ParseError, "memory model JSON must be an object");
    const auto field = [&](const char *key, std::uint64_t fallback) -> std::uint64_t {
        if (!j.contains(key))
            return fallback;
        const auto &v = j.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            throw Error(ErrorCode::ParseError, std::string("memory model field '") + key +
                                                   "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    };
    MemoryModel m;
    m.bytesPerVoxelFeature = field("bytes_per_voxel_feature", m.bytesPerVoxelFeature);
    m.bytesPerSplat = field("bytes_per_splat", m.bytesPerSplat);
    m.overheadBytes = field("overhead_bytes", m.overheadBytes);
    m.ceilingBytes = field("ceiling_bytes", m.ceilingBytes);
    return m;
}

nlohmann::json
memoryModelToJson(const MemoryModel &model) {
    return {{"bytes_per_voxel_feature", model.bytesPerVoxelFeature},
            {"bytes_per_splat", model.bytesPerSplat},
            {"overhead_bytes", model.overheadBytes},
            {"ceiling_bytes", model.ceilingBytes}};
}

std::uint64_t
modeledBytes(const MemoryModel &model, std::uint64_t liveVoxels, std::uint64_t splatVoxels) {
    return model.overheadBytes + model.bytesPerVoxelFeature * liveVoxels + model.bytesPerSplat * splatVoxels;
}

std::uint64_t
peakTileVoxels(const SparseVoxelGrid &grid, const std::vector<CameraModel> &cameras, int gridN,
               const BenchOptions &options) {
    const double voxelSize = 1.0 / grid.resolution();
    std::uint64_t peak = 0;
    for (const CameraModel &cam : cameras) {
        const double worldMargin = splatWorldMargin(cam, options.marginPx);
        for (const Tile &tile : makeTiles(cam, gridN, options.marginPx))
            peak = std::max<std::uint64_t>(peak, cullVoxels(grid, tileFrustum(cam, tile, worldMargin), voxelSize).keptCount);
    }
    return peak;
}

ConfigReport
benchConfig(const AnchorResult &anchor, const BenchConfig &config, const std::vector<CameraModel> &cameras,
            const MemoryModel &model, const BenchOptions &options) {
    ConfigReport r;
    r.config = config.name();
    r.resolution = anchor.truth.resolution();
    switch (config.kind) {
    case BenchConfig::Kind::Raw:
        r.liveVoxels = anchor.candidates.size();
        r.peakTileVoxels = r.liveVoxels;
        break;
    case BenchConfig::Kind::Mask:
        r.liveVoxels = anchor.truth.size();
        r.peakTileVoxels = r.liveVoxels;
        break;
    case BenchConfig::Kind::MaskBlock:
        if (config.blockN < 1)
            throw Error(ErrorCode::InvalidArgument, "block grid must be at least 1x1");
        if (cameras.empty())
            throw Error(ErrorCode::InvalidArgument, "blocked configurations need at least one camera");
        r.liveVoxels = anchor.truth.size();
        r.peakTileVoxels = peakTileVoxels(anchor.truth, cameras, config.blockN, options);
        break;
    }
    r.modeledBytes = modeledBytes(model, r.liveVoxels, r.peakTileVoxels);
    r.exceedsCeiling = model.ceilingBytes != 0 && r.modeledBytes > model.ceilingBytes;
    return r;
}

ConfigReport
benchConfig(const TriangleMesh &mesh, std::uint32_t resolution, const BenchConfig &config,
            const std::vector<CameraModel> &cameras, const MemoryModel &model, const BenchOptions &options) {
    return benchConfig(runAnchorPipeline(mesh, resolution, options.threads), config, cameras, model, options);
}

std::vector<ConfigReport>
benchTable(const AnchorResult &anchor, const std::vector<CameraModel> &cameras, const MemoryModel &model,
           const BenchOptions &options) {
    std::vector<ConfigReport> rows;
    for (const BenchConfig &c : {BenchConfig::raw(), BenchConfig::mask(), BenchConfig::maskBlock(2),
                                 BenchConfig::maskBlock(4)})
        rows.push_back(benchConfig(anchor, c, cameras, model, options));
    return rows;
}

nlohmann::json
benchTableToJson(const std::vector<ConfigReport> &rows, const AnchorResult &anchor, const MemoryModel &model) {
    nlohmann::json j;
    j["note"] = "modeled_bytes is a count-based cost model; only the ordering of rows and voxel-count ratios are "
                "meaningful, not absolute device memory";
    j["model"] = memoryModelToJson(model);
    j["redundancy_ratio"] = anchor.report.redundancyRatio;
    nlohmann::json arr = nlohmann::json::array();
    for (const ConfigReport &r : rows)
        arr.push_back({{"config", r.config},
                       {"resolution", r.resolution},
                       {"live_voxels", r.liveVoxels},
                       {"peak_tile_voxels", r.peakTileVoxels},
                       {"modeled_bytes", r.modeledBytes},
                       {"modeled_mb", static_cast<double>(r.modeledBytes) / (1024.0 * 1024.0)},
                       {"exceeds_ceiling", r.exceedsCeiling}});
    j["rows"] = arr;
    return j;
}

std::string
benchTableToCsv(const std::vector<ConfigReport> &rows) {
    std::ostringstream out;
    out << "config,resolution,live_voxels,peak_tile_voxels,modeled_bytes,exceeds_ceiling\n";
    for (const ConfigReport &r : rows)
        out << r.config << ',' << r.resolution << ',' << r.liveVoxels << ',' << r.peakTileVoxels << ','
            << r.modeledBytes << ',' << (r.exceedsCeiling ? "true" : "false") << '\n';
    return out.str();
}

} // namespace voxup
