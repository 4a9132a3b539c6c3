// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nerfgt/field.hpp"
#include "nerfgt/random.hpp"

namespace nerfgt {

/// Offset applied to secondary rays leaving a surface.
inline constexpr double kSecondaryRayOffset = 1e-4;

struct ShadeDiagnostics {
    std::vector<std::string> warnings;
};

/// Throws ValidationError when a spec violates its kind's constraints.
void validate_shader(const ShaderSpec& spec);

/// Lambertian diffuse shading with shadow rays. For every non-empty sample whose
/// material matches spec.target:
///   c = clamp01(albedo * sum_lights (1/rho) sum_rho I_eff * max(0, n.l) * V)
/// where I_eff is the light intensity, scaled by scene.glass_intensity_scale on glass.
/// Light positions are drawn from per-sample streams derived from `seed`.
ExplicitField shade_diffuse(const ExplicitField& field, const Scene& scene, const ShaderSpec& spec,
                            std::uint64_t seed, ShadeDiagnostics* diagnostics = nullptr);

/// Shaded diffuse colour at a surface point (shared by the reflection pass).
Rgb diffuse_colour(const Scene& scene, std::uint32_t surface_id, const Vec3& point, std::uint32_t rho,
                   RandomStream& rng);

/// Single-path mirror reflection for glass samples:
///   c = (1 - reflectance) * c_local + reflectance * c_bounce
/// with up to ord - 1 bounces; a missed bounce sees `background`.
ExplicitField shade_reflection(const ExplicitField& field, const Scene& scene, const ShaderSpec& spec,
                               const SynthConfig& config, std::uint64_t seed,
                               ShadeDiagnostics* diagnostics = nullptr);

/// First surface hit by the mirror bounce leaving a sample, if any.
std::optional<Hit> reflection_bounce(const Scene& scene, const RaySample& sample, double t_max, double delta);

/// Applies every spec in order: diffuse passes, then reflection passes.
ExplicitField apply_shaders(const ExplicitField& field, const Scene& scene, std::span<const ShaderSpec> specs,
                            const SynthConfig& config, std::uint64_t seed, ShadeDiagnostics* diagnostics = nullptr);

/// Rounds colours to the nearest value representable at `bit_depth` (8 or 16).
ExplicitField quantize_colours(const ExplicitField& field, int bit_depth);

} // namespace nerfgt
