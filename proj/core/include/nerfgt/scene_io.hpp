// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nerfgt/scene.hpp"

namespace nerfgt {

inline constexpr int kSceneSchemaVersion = 1;

/// Loads and validates a JSON scene file. OBJ paths resolve relative to the file.
/// Schema violations throw ValidationError naming the offending field.
SceneFile load_scene(const std::filesystem::path& path);
SceneFile parse_scene(std::string_view json_text, const std::filesystem::path& base_dir = ".");

/// Writes the resolved scene (meshes expanded to triangles and rectangles).
void save_scene(const SceneFile& scene, const std::filesystem::path& path);
std::string dump_scene(const SceneFile& scene);

/// Checks every cross-reference and value-range invariant of a resolved scene.
void validate_scene(const SceneFile& scene);

/// SHA-256 over a canonical little-endian binary encoding of the scene.
std::string scene_hash(const SceneFile& scene);

/// Reads `v` and triangular `f` records; winding defines the normal. Normal,
/// texture, group and material records are ignored; any face that is not a
/// triangle throws ValidationError with the line number.
std::vector<TriangleSurface> import_obj(const std::filesystem::path& path, std::uint32_t material_id);
std::vector<TriangleSurface> parse_obj(std::string_view text, std::uint32_t material_id,
                                       const std::string& source_name = "<obj>");

enum class PrimitiveKind { box, uv_sphere, plane };

struct PrimitiveOptions {
    std::uint32_t segments = 16;
    std::uint32_t rings = 8;
    /// Emit rectangles instead of triangle pairs (box faces, plane).
    bool rects = false;
};

/// Unit primitives (box [-0.5, 0.5]^3, unit-radius sphere, unit square in the
/// XZ plane facing +Y) under an affine transform, with outward normals.
std::vector<Surface> build_primitive(PrimitiveKind kind, const Mat4& transform, std::uint32_t material_id,
                                     const PrimitiveOptions& options = {});

/// Affine transform from per-axis scale then translation.
Mat4 scale_translate(const Vec3& scale, const Vec3& translate);

} // namespace nerfgt
