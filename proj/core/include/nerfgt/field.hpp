// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nerfgt/scene.hpp"

namespace nerfgt {

/// One volumetric sample along a ray.
struct RaySample {
    std::uint32_t view_id = 0;
    std::uint32_t ray_id = 0; // index into ExplicitField::rays, or pixel index within a view for cast_view
    std::uint32_t surface_id = kNoSurface;
    double t = 0.0;
    double delta_prime = 0.0;
    Vec3 position;
    Vec3 direction;
    Rgb colour{0.0, 0.0, 0.0};
    double density = 0.0;
    bool is_empty_space = false;
    bool grazing = false;

    friend bool operator==(const RaySample&, const RaySample&) = default;
};

struct RayRecord {
    std::uint32_t view_id = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    Vec3 origin;
    Vec3 direction;
    std::uint32_t first_sample = 0;
    std::uint32_t sample_count = 0;

    friend bool operator==(const RayRecord&, const RayRecord&) = default;
};

struct ViewInfo {
    std::uint32_t view_id = 0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    Vec3 origin;

    friend bool operator==(const ViewInfo&, const ViewInfo&) = default;
};

/// Explicit ground-truth radiance field: every ray's samples stored contiguously
/// and sorted ascending in t. Together these realize the masked depth, colour and
/// density matrices with their valid-index records.
struct ExplicitField {
    std::vector<ViewInfo> views;
    std::vector<RayRecord> rays;
    std::vector<RaySample> samples;
    std::uint32_t surface_count = 0;

    std::size_t n_pts() const { return samples.size(); }
    std::span<const RaySample> ray_samples(std::size_t ray) const;
    const ViewInfo* find_view(std::uint32_t view_id) const;

    friend bool operator==(const ExplicitField&, const ExplicitField&) = default;
};

struct SynthDiagnostics {
    std::size_t duplicate_hits = 0;
    std::size_t grazing_samples = 0;
    std::size_t empty_rays = 0;
};

/// Result of casting one camera: a ray per pixel (row-major) and its samples.
struct ViewCast {
    std::vector<RayRecord> rays;
    std::vector<RaySample> samples;
};

ViewCast cast_view(const Scene& scene, const Camera& camera, std::uint32_t view_id, const SynthConfig& config,
                   SynthDiagnostics* diagnostics = nullptr);

/// Casts every camera; view ids are camera indices.
ExplicitField generate_field(const Scene& scene, std::span<const Camera> cameras, const SynthConfig& config,
                             SynthDiagnostics* diagnostics = nullptr);

/// Throws ValidationError if any structural invariant of the field fails.
void validate_field(const ExplicitField& field);

struct FieldSplit {
    ExplicitField train;
    ExplicitField novel;
    /// Indices of the source field's rays in each part, in output order.
    std::vector<std::uint32_t> train_rays;
    std::vector<std::uint32_t> novel_rays;
};

/// Splits by whole views, or takes round(fraction * rays) of every view into the
/// training part using a seeded shuffle. Fractions outside (0, 1) are rejected.
FieldSplit split_train_novel(const ExplicitField& field, const Partition& partition, std::uint64_t seed);

/// Builds a new field from a subset of the source's rays, reindexing rays and samples.
ExplicitField select_rays(const ExplicitField& field, std::span<const std::uint32_t> ray_indices);

/// Rounds every real value to the precision of the float32 interchange format.
ExplicitField to_interchange_precision(const ExplicitField& field);

} // namespace nerfgt
