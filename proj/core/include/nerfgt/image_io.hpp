// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "nerfgt/render.hpp"

namespace nerfgt {

/// 8-bit RGB PNG; channels are clamped and rounded to the nearest level.
void write_png(const Image& image, const std::filesystem::path& path);

/// Lossless dump: `<stem>.f32` holds little-endian float32 RGB, row-major, and
/// `<stem>.json` is a sidecar manifest with the shape, dtype and checksum.
void write_float_image(const Image& image, const std::filesystem::path& stem);
Image read_float_image(const std::filesystem::path& stem);

} // namespace nerfgt
