// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/shading.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nerfgt/error.hpp"
#include "parallel.hpp"

namespace nerfgt {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Vec3 sample_light_point(const LightSource& light, const Vec3& shaded_point, RandomStream& rng) {
    if (light.radius <= 0.0) {
        return light.position;
    }
    const Vec3 to_point = shaded_point - light.position;
    const double dist = length(to_point);
    if (!(dist > 0.0)) {
        return light.position;
    }
    // Disc centred on the light, facing the shaded point.
    const Vec3 w = to_point / dist;
    const Vec3 helper = std::abs(w.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 u = normalize(cross(helper, w));
    const Vec3 v = cross(w, u);
    const double r = light.radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    return light.position + (r * std::cos(phi)) * u + (r * std::sin(phi)) * v;
}

bool matches_target(const Material& mat, ShaderTarget target) {
    switch (target) {
    case ShaderTarget::all:
        return true;
    case ShaderTarget::solid:
        return !mat.glass;
    case ShaderTarget::glass:
        return mat.glass;
    }
    return false;
}

} // namespace

void validate_shader(const ShaderSpec& spec) {
    const std::string where = "shader '" + spec.name + "'";
    if (spec.rho < 1) {
        throw ValidationError(where + ": rho must be a positive integer");
    }
    if (!(spec.omega > 0.0 && spec.omega <= 256.0)) {
        throw ValidationError(where + ": omega must lie in (0, 256]");
    }
    if (spec.kind == ShaderKind::diffuse && spec.ord != 1) {
        throw ValidationError(where + ": diffuse shaders have ord = 1");
    }
    if (spec.kind == ShaderKind::reflection && spec.ord < 2) {
        throw ValidationError(where + ": reflection shaders need ord >= 2");
    }
}

Rgb diffuse_colour(const Scene& scene, std::uint32_t surface_id, const Vec3& point, std::uint32_t rho,
                   RandomStream& rng) {
    const Material& mat = scene.material_of(surface_id);
    const Vec3& n = surface_normal(scene.surfaces[surface_id]);
    const double material_scale = mat.glass ? scene.glass_intensity_scale : 1.0;
    double irradiance = 0.0;
    for (const LightSource& light : scene.lights) {
        double sum = 0.0;
        for (std::uint32_t i = 0; i < rho; ++i) {
            const Vec3 target = sample_light_point(light, point, rng);
            const Vec3 to_light = target - point;
            const double dist = length(to_light);
            if (!(dist > 0.0)) {
                continue;
            }
            const double cosine = dot(n, to_light) / dist;
            if (cosine <= 0.0) {
                continue;
            }
            if (scene.occluded(point, target, kSecondaryRayOffset)) {
                continue;
            }
            sum += light.intensity * material_scale * cosine;
        }
        irradiance += sum / static_cast<double>(rho);
    }
    return {clamp01(mat.albedo[0] * irradiance), clamp01(mat.albedo[1] * irradiance),
            clamp01(mat.albedo[2] * irradiance)};
}

ExplicitField shade_diffuse(const ExplicitField& field, const Scene& scene, const ShaderSpec& spec,
                            std::uint64_t seed, ShadeDiagnostics* diagnostics) {
    if (spec.kind != ShaderKind::diffuse) {
        throw ValidationError("shade_diffuse requires a diffuse shader spec");
    }
    validate_shader(spec);
    ExplicitField out = field;
    if (scene.lights.empty()) {
        if (diagnostics) {
            diagnostics->warnings.push_back("shader '" + spec.name + "': scene has no lights; colours unchanged");
        }
        return out;
    }
    detail::parallel_for(out.samples.size(), [&](std::size_t i) {
        RaySample& s = out.samples[i];
        if (s.is_empty_space || s.surface_id == kNoSurface) {
            return;
        }
        if (!matches_target(scene.material_of(s.surface_id), spec.target)) {
            return;
        }
        RandomStream rng(derive_seed(seed, StreamTag::light_sampling, i));
        s.colour = diffuse_colour(scene, s.surface_id, s.position, spec.rho, rng);
    });
    return out;
}

std::optional<Hit> reflection_bounce(const Scene& scene, const RaySample& sample, double t_max, double delta) {
    Ray bounce;
    bounce.origin = sample.position;
    bounce.direction = normalize(reflect(sample.direction, surface_normal(scene.surfaces.at(sample.surface_id))));
    return scene.intersect_first(bounce, t_max, delta, kSecondaryRayOffset);
}

namespace {

Rgb trace_bounce(const Scene& scene, const Hit& hit, const Vec3& incoming, std::uint32_t remaining,
                 const ShaderSpec& spec, const SynthConfig& config, RandomStream& rng) {
    Rgb local = diffuse_colour(scene, hit.surface_id, hit.position, spec.rho, rng);
    const Material& mat = scene.material_of(hit.surface_id);
    if (!mat.glass || remaining <= 1 || mat.reflectance <= 0.0) {
        return local;
    }
    Ray next;
    next.origin = hit.position;
    next.direction = normalize(reflect(incoming, surface_normal(scene.surfaces[hit.surface_id])));
    const auto next_hit = scene.intersect_first(next, config.t_max, config.delta, kSecondaryRayOffset);
    const Rgb far = next_hit ? trace_bounce(scene, *next_hit, next.direction, remaining - 1, spec, config, rng)
                             : config.background;
    for (int ch = 0; ch < 3; ++ch) {
        local[ch] = (1.0 - mat.reflectance) * local[ch] + mat.reflectance * far[ch];
    }
    return local;
}

} // namespace

ExplicitField shade_reflection(const ExplicitField& field, const Scene& scene, const ShaderSpec& spec,
                               const SynthConfig& config, std::uint64_t seed, ShadeDiagnostics* diagnostics) {
    if (spec.kind != ShaderKind::reflection) {
        throw ValidationError("shade_reflection requires a reflection shader spec");
    }
    validate_shader(spec);
    if (scene.lights.empty() && diagnostics) {
        diagnostics->warnings.push_back("shader '" + spec.name + "': scene has no lights; bounces see no light");
    }
    ExplicitField out = field;
    detail::parallel_for(out.samples.size(), [&](std::size_t i) {
        RaySample& s = out.samples[i];
        if (s.is_empty_space || s.surface_id == kNoSurface || !(s.density < 1.0)) {
            return;
        }
        const Material& mat = scene.material_of(s.surface_id);
        if (!mat.glass || mat.reflectance <= 0.0) {
            return;
        }
        RandomStream rng(derive_seed(seed, StreamTag::bounce_sampling, i));
        const auto hit = reflection_bounce(scene, s, config.t_max, config.delta);
        const Vec3 bounce_dir = normalize(reflect(s.direction, surface_normal(scene.surfaces[s.surface_id])));
        const Rgb far = hit ? trace_bounce(scene, *hit, bounce_dir, spec.ord - 1, spec, config, rng)
                            : config.background;
        for (int ch = 0; ch < 3; ++ch) {
            s.colour[ch] = clamp01((1.0 - mat.reflectance) * s.colour[ch] + mat.reflectance * far[ch]);
        }
    });
    return out;
}

ExplicitField apply_shaders(const ExplicitField& field, const Scene& scene, std::span<const ShaderSpec> specs,
                            const SynthConfig& config, std::uint64_t seed, ShadeDiagnostics* diagnostics) {
    ExplicitField out = field;
    for (const auto& spec : specs) {
        if (spec.kind == ShaderKind::diffuse) {
            out = shade_diffuse(out, scene, spec, seed, diagnostics);
        }
    }
    for (const auto& spec : specs) {
        if (spec.kind == ShaderKind::reflection) {
            out = shade_reflection(out, scene, spec, config, seed, diagnostics);
        }
    }
    return out;
}

ExplicitField quantize_colours(const ExplicitField& field, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw ValidationError("quantize_colours: bit depth must be 8 or 16");
    }
    const double levels = static_cast<double>((1u << bit_depth) - 1u);
    ExplicitField out = field;
    for (auto& s : out.samples) {
        for (auto& c : s.colour) {
            c = std::round(c * levels) / levels;
        }
    }
    return out;
}

} // namespace nerfgt
