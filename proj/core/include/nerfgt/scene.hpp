// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nerfgt/geometry.hpp"

namespace nerfgt {

struct Material {
    std::string name;
    Rgb albedo{1.0, 1.0, 1.0};
    double density = 1.0; // 1 for solids, < 1 for glass
    bool glass = false;
    double reflectance = 0.0;
};

struct LightSource {
    std::string name;
    Vec3 position;
    double intensity = 1.0;
    double radius = 0.0; // 0 = point light, otherwise a disc facing the shaded point
};

enum class ShaderKind { diffuse, reflection };

/// Which samples a shader pass touches, by material class.
enum class ShaderTarget { all, solid, glass };

struct ShaderSpec {
    std::string name;
    ShaderKind kind = ShaderKind::diffuse;
    std::uint32_t rho = 1; // light samples per light
    std::uint32_t ord = 1; // trace order
    double omega = 256.0;  // colour-transform range, (0, 256]
    ShaderTarget target = ShaderTarget::all;
};

enum class HitMode { all_hits, earliest_hit };
enum class EmptySpace { far_bound_sample, omit };

struct SynthConfig {
    double t_max = 1000.0;
    double delta = kDefaultDelta;
    HitMode hit_mode = HitMode::all_hits;
    EmptySpace empty_space = EmptySpace::far_bound_sample;
    Rgb background{0.0, 0.0, 0.0};
};

/// Rigid world-from-camera transform, row-major 4x4. The camera looks down -Z with +Y up.
using Mat4 = std::array<double, 16>;

constexpr Mat4 identity_matrix() {
    return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
}

struct Camera {
    Mat4 pose = identity_matrix();
    double fov_y_deg = 45.0;
    std::uint32_t width = 1;
    std::uint32_t height = 1;

    Vec3 position() const { return {pose[3], pose[7], pose[11]}; }
    /// Ray through the centre of pixel (row, col).
    Ray pixel_ray(std::uint32_t row, std::uint32_t col) const;
};

/// Builds a pose at `eye` looking at `target`. `up` must not be parallel to the view direction.
Mat4 look_at(const Vec3& eye, const Vec3& target, const Vec3& up = {0.0, 1.0, 0.0});

/// Throws ValidationError unless the upper-left 3x3 block is a rotation within 1e-6
/// and the last row is (0, 0, 0, 1). `where` prefixes the error message.
void validate_rigid(const Mat4& m, const std::string& where);

using Surface = std::variant<TriangleSurface, RectSurface>;

const Vec3& surface_normal(const Surface& s);
std::uint32_t surface_material(const Surface& s);
std::optional<Hit> intersect_surface(const Ray& ray, const Surface& s, double t_max, double delta);

struct Scene {
    std::vector<Surface> surfaces;
    std::vector<Material> materials;
    std::vector<LightSource> lights;
    /// Intensity multiplier applied to glass surfaces by the diffuse shader.
    double glass_intensity_scale = 0.5;

    const Material& material_of(std::uint32_t surface_id) const;

    /// All hits with t in (t_min, t_max], ascending in t; equal-t duplicates keep the
    /// lowest surface index. `duplicates`, when given, counts the dropped hits.
    std::vector<Hit> intersect_all(const Ray& ray, double t_max, double delta, double t_min = 0.0,
                                   std::size_t* duplicates = nullptr) const;

    /// Earliest hit with t in (t_min, t_max]; ties go to the lowest surface index.
    std::optional<Hit> intersect_first(const Ray& ray, double t_max, double delta, double t_min = 0.0) const;

    /// True if any surface blocks the open segment between `from` and `to`,
    /// ignoring `epsilon` at both ends.
    bool occluded(const Vec3& from, const Vec3& to, double epsilon) const;
};

/// Train/novel partition. Either whole views or a per-view fraction of rays.
struct ViewPartition {
    std::vector<std::uint32_t> train;
    std::vector<std::uint32_t> novel;
};

struct RayFractionPartition {
    double fraction = 0.8;
};

using Partition = std::variant<ViewPartition, RayFractionPartition>;

/// Fully resolved scene description as loaded from disk.
struct SceneFile {
    int version = 1;
    Scene scene;
    std::vector<ShaderSpec> shaders;
    SynthConfig synth;
    std::vector<Camera> cameras;
    std::optional<Partition> partition;
    /// Externally published shader complexity to compare against, if any.
    std::optional<double> reported_lambda;
};

} // namespace nerfgt
