// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace voxup {

struct SelftestResult {
    bool passed = false;
    nlohmann::json report;
    std::vector<std::filesystem::path> artifacts;
};

/// Runs the invariant suite on bundled primitives at desk-scale resolutions
/// and writes its artifacts (report, grids, mask, render) into `outDir`.
/// Output bytes depend only on `seed`.
SelftestResult runSelftest(std::uint64_t seed, unsigned threads, const std::filesystem::path &outDir);

} // namespace voxup
