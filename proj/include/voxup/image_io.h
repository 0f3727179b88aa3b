// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/render.h>

#include <filesystem>

namespace voxup {

/// 8-bit RGBA, non-interlaced, zlib level 6, no time or text chunks.
void writePng(const RenderImage &image, const std::filesystem::path &path);

/// Binary P6 ("P6\n<w> <h>\n255\n" + RGB bytes); alpha is dropped.
void writePpm(const RenderImage &image, const std::filesystem::path &path);

/// Picks the format from the extension (.ppm, otherwise PNG).
void writeImage(const RenderImage &image, const std::filesystem::path &path);

/// Reads back an 8-bit RGBA PNG written by writePng (depth is not stored and
/// comes back as +inf / finite-zero by alpha).
RenderImage readPng(const std::filesystem::path &path);

} // namespace voxup
