// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "nerfgt/scene.hpp"
#include "nerfgt/scene_io.hpp"

namespace nerfgt::testing {

inline Material solid(const std::string& name, Rgb albedo) {
    Material m;
    m.name = name;
    m.albedo = albedo;
    return m;
}

inline Material glass(const std::string& name, Rgb albedo, double density, double reflectance) {
    Material m;
    m.name = name;
    m.albedo = albedo;
    m.density = density;
    m.glass = true;
    m.reflectance = reflectance;
    return m;
}

inline Camera camera_at(const Vec3& eye, const Vec3& target, std::uint32_t w, std::uint32_t h,
                        double fov = 45.0) {
    Camera c;
    c.pose = look_at(eye, target);
    c.fov_y_deg = fov;
    c.width = w;
    c.height = h;
    return c;
}

struct Cuboid {
    Vec3 lo;
    Vec3 hi;
};

/// Three axis-aligned rectangular cuboids and their bounds.
inline std::array<Cuboid, 3> three_cuboids() {
    return {{
        {{-2.0, -1.0, -0.5}, {-1.0, 1.0, 0.5}},
        {{-0.6, -1.0, -1.5}, {0.6, 0.2, -0.5}},
        {{1.0, -0.5, -0.2}, {1.8, 0.3, 1.2}},
    }};
}

/// Cuboid scene made of rectangles, three neighbouring 200x200 views, earliest-hit mode.
inline SceneFile cuboid_scene(std::uint32_t resolution = 200) {
    SceneFile f;
    f.scene.materials = {solid("grey", {0.7, 0.7, 0.7})};
    f.scene.lights = {{"key", {3.0, 5.0, 4.0}, 1.0, 0.0}};
    for (const auto& c : three_cuboids()) {
        const Vec3 size = c.hi - c.lo;
        const Vec3 centre = (c.lo + c.hi) / 2.0;
        PrimitiveOptions opts;
        opts.rects = true;
        auto faces = build_primitive(PrimitiveKind::box, scale_translate(size, centre), 0, opts);
        f.scene.surfaces.insert(f.scene.surfaces.end(), faces.begin(), faces.end());
    }
    f.shaders = {{"diffuse", ShaderKind::diffuse, 4, 1, 255.0, ShaderTarget::all}};
    f.synth.t_max = 100.0;
    f.synth.hit_mode = HitMode::earliest_hit;
    f.cameras = {
        camera_at({-1.0, 1.0, 6.0}, {0.0, 0.0, 0.0}, resolution, resolution),
        camera_at({0.0, 1.2, 6.3}, {0.0, 0.0, 0.0}, resolution, resolution),
        camera_at({1.0, 1.0, 6.0}, {0.0, 0.0, 0.0}, resolution, resolution),
    };
    f.partition = RayFractionPartition{0.8};
    return f;
}

} // namespace nerfgt::testing
