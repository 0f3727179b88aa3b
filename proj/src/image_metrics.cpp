// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/image_metrics.h>

#include <cmath>
#include <string>

namespace voxup {

namespace {

void
checkSameSize(const ImageRgb &a, const ImageRgb &b) {
    if (a.width != b.width || a.height != b.height)
        throw Error(ErrorCode::SizeMismatch, "image dimensions differ: " + std::to_string(a.width) + "x" +
                                                 std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                                                 std::to_string(b.height));
    if (a.width < 1 || a.height < 1)
        throw Error(ErrorCode::InvalidArgument, "images must be non-empty");
}

std::vector<double>
gaussianKernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double c = 0.5 * (size - 1);
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - c;
        k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (double &v : k)
        v /= sum;
    return k;
}

// Separable "valid" filtering of a single-channel plane.
std::vector<double>
filterValid(const std::vector<double> &plane, int w, int h, const std::vector<double> &k) {
    const int n = static_cast<int>(k.size());
    const int ow = w - n + 1, oh = h - n + 1;
    std::vector<double> rows(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += k[static_cast<std::size_t>(i)] * plane[static_cast<std::size_t>(y) * w + x + i];
            rows[static_cast<std::size_t>(y) * ow + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += k[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    return out;
}

} // namespace

ImageRgb
toImageRgb(const RenderImage &image) {
    ImageRgb out(image.width, image.height);
    for (std::size_t p = 0; p < static_cast<std::size_t>(image.width) * image.height; ++p)
        for (std::size_t c = 0; c < 3; ++c)
            out.data[3 * p + c] = image.rgba[4 * p + c] / 255.0;
    return out;
}

ImageRgb
crop(const ImageRgb &image, const PixelRect &rect) {
    if (!PixelRect{0, 0, image.width, image.height}.contains(rect))
        throw Error(ErrorCode::InvalidArgument, "crop rect outside image");
    ImageRgb out(rect.w, rect.h);
    for (int y = 0; y < rect.h; ++y)
        for (int x = 0; x < rect.w; ++x)
            for (int c = 0; c < 3; ++c)
                out.at(x, y, c) = image.at(rect.x0 + x, rect.y0 + y, c);
    return out;
}

double
l1Loss(const ImageRgb &a, const ImageRgb &b) {
    checkSameSize(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        sum += std::abs(a.data[i] - b.data[i]);
    return sum / static_cast<double>(a.data.size());
}

double
ssim(const ImageRgb &a, const ImageRgb &b, const SsimParams &params) {
    checkSameSize(a, b);
    if (params.window < 1 || a.width < params.window || a.height < params.window)
        throw Error(ErrorCode::InvalidArgument, "SSIM needs images at least as large as the window");
    const auto k = gaussianKernel(params.window, params.sigma);
    const int w = a.width, h = a.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;

    double total = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = a.data[3 * i + c];
            y[i] = b.data[3 * i + c];
            xx[i] = x[i] * x[i];
            yy[i] = y[i] * y[i];
            xy[i] = x[i] * y[i];
        }
        const auto mx = filterValid(x, w, h, k), my = filterValid(y, w, h, k);
        const auto sxx = filterValid(xx, w, h, k), syy = filterValid(yy, w, h, k), sxy = filterValid(xy, w, h, k);
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double varX = sxx[i] - mx[i] * mx[i];
            const double varY = syy[i] - my[i] * my[i];
            const double cov = sxy[i] - mx[i] * my[i];
            total += ((2.0 * mx[i] * my[i] + params.c1) * (2.0 * cov + params.c2)) /
                     ((mx[i] * mx[i] + my[i] * my[i] + params.c1) * (varX + varY + params.c2));
        }
        count += mx.size();
    }
    return total / static_cast<double>(count);
}

double
dssim(const ImageRgb &a, const ImageRgb &b, const SsimParams &params) {
    return 0.5 * (1.0 - ssim(a, b, params));
}

double
psnr(const ImageRgb &a, const ImageRgb &b) {
    checkSameSize(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(a.data.size());
    if (mse == 0.0)
        return kPsnrIdenticalDb;
    return std::min(kPsnrIdenticalDb, 10.0 * std::log10(1.0 / mse));
}

} // namespace voxup
