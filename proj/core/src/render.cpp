// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nerfgt/error.hpp"

namespace nerfgt {

double sample_opacity(const RaySample& s, OpacityRule rule) {
    const double optical = rule == OpacityRule::standard ? s.density * s.delta_prime : s.density;
    return 1.0 - std::exp(-optical);
}

Rgb composite_ray(std::span<const RaySample> samples, OpacityRule rule) {
    Rgb c{0.0, 0.0, 0.0};
    double depth = 0.0; // sum of sigma_j * delta'_j over samples in front
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const RaySample& s = samples[i];
        if (i > 0 && samples[i - 1].t > s.t) {
            throw ValidationError("composite_ray: samples must be sorted ascending in t");
        }
        const double weight = std::exp(-depth) * sample_opacity(s, rule);
        for (int ch = 0; ch < 3; ++ch) {
            c[ch] += weight * s.colour[ch];
        }
        depth += s.density * s.delta_prime;
    }
    for (auto& v : c) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return c;
}

Image render_view(const ExplicitField& field, std::uint32_t view_id, OpacityRule rule, const Rgb& background,
                  RenderDiagnostics* diagnostics) {
    const ViewInfo* view = field.find_view(view_id);
    if (!view) {
        throw ValidationError("render_view: field has no view " + std::to_string(view_id));
    }
    Image img(view->width, view->height, background);
    std::vector<bool> covered(img.pixels.size(), false);
    for (std::size_t r = 0; r < field.rays.size(); ++r) {
        const RayRecord& rec = field.rays[r];
        if (rec.view_id != view_id) {
            continue;
        }
        if (rec.row >= img.height || rec.col >= img.width) {
            throw ValidationError("render_view: ray pixel lies outside the view");
        }
        img.at(rec.row, rec.col) = composite_ray(field.ray_samples(r), rule);
        covered[static_cast<std::size_t>(rec.row) * img.width + rec.col] = true;
    }
    if (diagnostics) {
        diagnostics->missing_pixels += static_cast<std::size_t>(std::count(covered.begin(), covered.end(), false));
    }
    return img;
}

} // namespace nerfgt
