// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nerfgt/field.hpp"

namespace nerfgt {

/// Opacity rule for compositing. Transmittance always accumulates sigma * delta'.
enum class OpacityRule {
    standard, // alpha = 1 - exp(-sigma * delta')
    modified, // alpha = 1 - exp(-sigma)
};

struct Image {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<Rgb> pixels; // row-major

    Image() = default;
    Image(std::uint32_t w, std::uint32_t h, Rgb fill = {0.0, 0.0, 0.0})
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    Rgb& at(std::uint32_t row, std::uint32_t col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
    const Rgb& at(std::uint32_t row, std::uint32_t col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

double sample_opacity(const RaySample& s, OpacityRule rule);

/// C = sum_i T_i * alpha_i * c_i with T_i = exp(-sum_{j<i} sigma_j * delta'_j),
/// clamped to [0, 1]. Throws ValidationError if samples are not ascending in t.
Rgb composite_ray(std::span<const RaySample> samples, OpacityRule rule);

struct RenderDiagnostics {
    std::size_t missing_pixels = 0;
};

/// Composites each ray of the view into its pixel. Pixels without a ray get `background`.
Image render_view(const ExplicitField& field, std::uint32_t view_id, OpacityRule rule,
                  const Rgb& background = {0.0, 0.0, 0.0}, RenderDiagnostics* diagnostics = nullptr);

} // namespace nerfgt
