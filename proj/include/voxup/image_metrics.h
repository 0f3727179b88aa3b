// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/partition.h>
#include <voxup/render.h>

#include <vector>

namespace voxup {

/// Interleaved RGB image with channels in [0, 1].
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ImageRgb() = default;
    ImageRgb(int w, int h, double fill = 0.0) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

    double &at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    double at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
};

/// RGB / 255; alpha is dropped (background is black).
ImageRgb toImageRgb(const RenderImage &image);

ImageRgb crop(const ImageRgb &image, const PixelRect &rect);

/// Mean absolute difference over all pixels and channels.
double l1Loss(const ImageRgb &a, const ImageRgb &b);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double c1 = 0.01 * 0.01;
    double c2 = 0.03 * 0.03;
};

/// Mean SSIM over all fully-inside Gaussian windows and all channels.
/// Images must be at least window x window.
double ssim(const ImageRgb &a, const ImageRgb &b, const SsimParams &params = {});

/// (1 - SSIM) / 2.
double dssim(const ImageRgb &a, const ImageRgb &b, const SsimParams &params = {});

/// Reported in place of +inf for identical images.
inline constexpr double kPsnrIdenticalDb = 100.0;

/// 10 log10(1 / MSE) with peak value 1.
double psnr(const ImageRgb &a, const ImageRgb &b);

} // namespace voxup
