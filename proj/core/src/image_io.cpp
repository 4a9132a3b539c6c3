// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

#include <json.hpp>

#include "binary_io.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/hash.hpp"

namespace nerfgt {

namespace {

std::uint8_t to_8bit(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

} // namespace

void write_png(const Image& image, const std::filesystem::path& path) {
    if (image.width == 0 || image.height == 0) {
        throw ValidationError("write_png: image is empty");
    }
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!file) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialisation failed");
    }
    std::vector<std::uint8_t> rows(static_cast<std::size_t>(image.width) * image.height * 3);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            rows[3 * i + ch] = to_8bit(image.pixels[i][ch]);
        }
    }
    std::vector<png_bytep> row_ptrs(image.height);
    for (std::uint32_t r = 0; r < image.height; ++r) {
        row_ptrs[r] = rows.data() + static_cast<std::size_t>(r) * image.width * 3;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed writing '" + path.string() + "'");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_rows(png, info, row_ptrs.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_float_image(const Image& image, const std::filesystem::path& stem) {
    detail::Bytes bytes;
    bytes.reserve(image.pixels.size() * 12);
    for (const auto& px : image.pixels) {
        for (double c : px) {
            detail::put_f32(bytes, c);
        }
    }
    auto data_path = stem;
    data_path += ".f32";
    detail::write_file(data_path, bytes);

    nlohmann::ordered_json meta;
    meta["format"] = "nerfgt-float-image";
    meta["version"] = 1;
    meta["width"] = image.width;
    meta["height"] = image.height;
    meta["channels"] = 3;
    meta["dtype"] = "float32";
    meta["endianness"] = "little";
    meta["layout"] = "row-major, interleaved RGB";
    meta["file"] = data_path.filename().string();
    meta["sha256"] = sha256_hex(bytes);
    auto meta_path = stem;
    meta_path += ".json";
    detail::write_text(meta_path, meta.dump(2) + "\n");
}

Image read_float_image(const std::filesystem::path& stem) {
    auto meta_path = stem;
    meta_path += ".json";
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(detail::read_text(meta_path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("float image manifest '" + meta_path.string() + "': " + e.what());
    }
    const auto width = meta.at("width").get<std::uint32_t>();
    const auto height = meta.at("height").get<std::uint32_t>();
    const auto bytes = detail::read_file(stem.parent_path() / meta.at("file").get<std::string>());
    if (sha256_hex(bytes) != meta.at("sha256").get<std::string>()) {
        throw ValidationError("float image '" + stem.string() + "': checksum mismatch");
    }
    if (bytes.size() != static_cast<std::size_t>(width) * height * 12) {
        throw ValidationError("float image '" + stem.string() + "': size does not match manifest");
    }
    Image img(width, height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            img.pixels[i][ch] = detail::get_f32(bytes, 3 * i + ch);
        }
    }
    return img;
}

} // namespace nerfgt
