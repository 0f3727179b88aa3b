// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/image_io.h>

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

namespace voxup {

namespace {

struct FileCloser {
    void operator()(std::FILE *f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

void
writePng(const RenderImage &image, const std::filesystem::path &path) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "PNG encoding failed for " + path.string());
    }
    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
        png_write_row(png, image.rgba.data() + static_cast<std::size_t>(y) * image.width * 4);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

RenderImage
readPng(const std::filesystem::path &path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file)
        throw Error(std::filesystem::exists(path) ? ErrorCode::IoError : ErrorCode::FileNotFound,
                    "cannot open " + path.string());
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::IoError, "libpng initialization failed");
    }
    RenderImage img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::ParseError, "PNG decoding failed for " + path.string());
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_RGBA) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::ParseError, path.string() + ": expected 8-bit RGBA PNG");
    }
    img = RenderImage(static_cast<int>(png_get_image_width(png, info)),
                      static_cast<int>(png_get_image_height(png, info)));
    for (int y = 0; y < img.height; ++y)
        png_read_row(png, img.rgba.data() + static_cast<std::size_t>(y) * img.width * 4, nullptr);
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    for (std::size_t i = 0; i < img.depth.size(); ++i)
        if (img.rgba[4 * i + 3] > 0)
            img.depth[i] = 0.0f;
    return img;
}

void
writePpm(const RenderImage &image, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    for (std::size_t i = 0; i < image.depth.size(); ++i)
        out.write(reinterpret_cast<const char *>(&image.rgba[4 * i]), 3);
    if (!out)
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void
writeImage(const RenderImage &image, const std::filesystem::path &path) {
    const auto ext = path.extension();
    if (ext == ".ppm")
        writePpm(image, path);
    else if (ext == ".png")
        writePng(image, path);
    else
        throw Error(ErrorCode::InvalidArgument, "unsupported image extension '" + ext.string() + "' (use .png or .ppm)");
}

} // namespace voxup
