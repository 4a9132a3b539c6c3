// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "nerfgt/error.hpp"
#include "nerfgt/random.hpp"
#include "parallel.hpp"

namespace nerfgt {

std::span<const RaySample> ExplicitField::ray_samples(std::size_t ray) const {
    const RayRecord& rec = rays.at(ray);
    return std::span<const RaySample>(samples).subspan(rec.first_sample, rec.sample_count);
}

const ViewInfo* ExplicitField::find_view(std::uint32_t view_id) const {
    for (const auto& v : views) {
        if (v.view_id == view_id) {
            return &v;
        }
    }
    return nullptr;
}

namespace {

RaySample sample_from_hit(const Scene& scene, const Ray& ray, const Hit& hit, std::uint32_t view_id,
                          std::uint32_t ray_id) {
    const Material& mat = scene.material_of(hit.surface_id);
    RaySample s;
    s.view_id = view_id;
    s.ray_id = ray_id;
    s.surface_id = hit.surface_id;
    s.t = hit.t;
    s.delta_prime = hit.delta_prime;
    s.position = hit.position;
    s.direction = ray.direction;
    s.colour = mat.albedo;
    s.density = mat.density;
    s.grazing = hit.grazing;
    return s;
}

RaySample empty_space_sample(const Ray& ray, const SynthConfig& config, std::uint32_t view_id, std::uint32_t ray_id) {
    RaySample s;
    s.view_id = view_id;
    s.ray_id = ray_id;
    s.t = config.t_max;
    s.delta_prime = config.delta;
    s.position = ray.origin + config.t_max * ray.direction;
    s.direction = ray.direction;
    s.colour = config.background;
    s.density = 0.0;
    s.is_empty_space = true;
    return s;
}

void validate_config(const SynthConfig& config) {
    if (!(config.t_max > 0.0) || !std::isfinite(config.t_max)) {
        throw ValidationError("synth.t_max must be positive and finite");
    }
    if (!(config.delta > 0.0) || !std::isfinite(config.delta)) {
        throw ValidationError("synth.delta must be positive and finite");
    }
}

} // namespace

ViewCast cast_view(const Scene& scene, const Camera& camera, std::uint32_t view_id, const SynthConfig& config,
                   SynthDiagnostics* diagnostics) {
    validate_config(config);
    if (camera.width == 0 || camera.height == 0) {
        throw ValidationError("camera resolution must be at least 1x1");
    }
    const std::size_t pixels = static_cast<std::size_t>(camera.width) * camera.height;
    std::vector<std::vector<RaySample>> per_ray(pixels);
    std::vector<Ray> rays(pixels);
    std::atomic<std::size_t> duplicates{0};
    std::atomic<std::size_t> empty_rays{0};

    detail::parallel_for(pixels, [&](std::size_t p) {
        const auto row = static_cast<std::uint32_t>(p / camera.width);
        const auto col = static_cast<std::uint32_t>(p % camera.width);
        Ray ray = camera.pixel_ray(row, col);
        ray.view_id = view_id;
        rays[p] = ray;
        const auto ray_id = static_cast<std::uint32_t>(p);
        auto& out = per_ray[p];
        if (config.hit_mode == HitMode::all_hits) {
            std::size_t dup = 0;
            for (const Hit& hit : scene.intersect_all(ray, config.t_max, config.delta, 0.0, &dup)) {
                out.push_back(sample_from_hit(scene, ray, hit, view_id, ray_id));
            }
            if (dup) {
                duplicates += dup;
            }
        } else if (const auto hit = scene.intersect_first(ray, config.t_max, config.delta)) {
            out.push_back(sample_from_hit(scene, ray, *hit, view_id, ray_id));
        }
        if (out.empty()) {
            ++empty_rays;
            if (config.empty_space == EmptySpace::far_bound_sample) {
                out.push_back(empty_space_sample(ray, config, view_id, ray_id));
            }
        }
    });

    ViewCast cast;
    cast.rays.reserve(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        RayRecord rec;
        rec.view_id = view_id;
        rec.row = rays[p].row;
        rec.col = rays[p].col;
        rec.origin = rays[p].origin;
        rec.direction = rays[p].direction;
        rec.first_sample = static_cast<std::uint32_t>(cast.samples.size());
        rec.sample_count = static_cast<std::uint32_t>(per_ray[p].size());
        cast.rays.push_back(rec);
        for (const auto& s : per_ray[p]) {
            if (diagnostics && s.grazing) {
                ++diagnostics->grazing_samples;
            }
            cast.samples.push_back(s);
        }
    }
    if (diagnostics) {
        diagnostics->duplicate_hits += duplicates.load();
        diagnostics->empty_rays += empty_rays.load();
    }
    return cast;
}

ExplicitField generate_field(const Scene& scene, std::span<const Camera> cameras, const SynthConfig& config,
                             SynthDiagnostics* diagnostics) {
    if (cameras.empty()) {
        throw ValidationError("generate_field requires at least one camera");
    }
    ExplicitField field;
    field.surface_count = static_cast<std::uint32_t>(scene.surfaces.size());
    for (std::size_t v = 0; v < cameras.size(); ++v) {
        const auto view_id = static_cast<std::uint32_t>(v);
        ViewCast cast = cast_view(scene, cameras[v], view_id, config, diagnostics);
        field.views.push_back({view_id, cameras[v].width, cameras[v].height, cameras[v].position()});
        const auto ray_base = static_cast<std::uint32_t>(field.rays.size());
        const auto sample_base = static_cast<std::uint32_t>(field.samples.size());
        for (auto rec : cast.rays) {
            rec.first_sample += sample_base;
            field.rays.push_back(rec);
        }
        for (auto s : cast.samples) {
            s.ray_id += ray_base;
            field.samples.push_back(s);
        }
    }
    return field;
}

void validate_field(const ExplicitField& field) {
    std::unordered_set<std::uint32_t> view_ids;
    for (const auto& v : field.views) {
        if (!view_ids.insert(v.view_id).second) {
            throw ValidationError("field: duplicate view id " + std::to_string(v.view_id));
        }
    }
    std::size_t expected_first = 0;
    for (std::size_t r = 0; r < field.rays.size(); ++r) {
        const RayRecord& rec = field.rays[r];
        const std::string where = "field: ray " + std::to_string(r);
        if (!view_ids.contains(rec.view_id)) {
            throw ValidationError(where + " references unknown view " + std::to_string(rec.view_id));
        }
        if (rec.first_sample != expected_first) {
            throw ValidationError(where + " samples are not contiguous");
        }
        expected_first += rec.sample_count;
        if (expected_first > field.samples.size()) {
            throw ValidationError(where + " sample range exceeds sample count");
        }
        for (std::uint32_t i = 0; i < rec.sample_count; ++i) {
            const RaySample& s = field.samples[rec.first_sample + i];
            if (s.ray_id != r || s.view_id != rec.view_id) {
                throw ValidationError(where + " has a sample with mismatched ids");
            }
            if (i > 0 && !(field.samples[rec.first_sample + i - 1].t < s.t)) {
                throw ValidationError(where + " samples are not strictly increasing in t");
            }
            if (!(s.density >= 0.0 && s.density <= 1.0) || !(s.t > 0.0)) {
                throw ValidationError(where + " has a sample outside its value range");
            }
        }
    }
    if (expected_first != field.samples.size()) {
        throw ValidationError("field: samples not covered by any ray");
    }
}

ExplicitField select_rays(const ExplicitField& field, std::span<const std::uint32_t> ray_indices) {
    ExplicitField out;
    out.surface_count = field.surface_count;
    std::unordered_set<std::uint32_t> used_views;
    for (std::uint32_t r : ray_indices) {
        used_views.insert(field.rays.at(r).view_id);
    }
    for (const auto& v : field.views) {
        if (used_views.contains(v.view_id)) {
            out.views.push_back(v);
        }
    }
    for (std::uint32_t r : ray_indices) {
        RayRecord rec = field.rays[r];
        const auto new_ray = static_cast<std::uint32_t>(out.rays.size());
        const auto first = static_cast<std::uint32_t>(out.samples.size());
        for (const RaySample& s : field.ray_samples(r)) {
            RaySample copy = s;
            copy.ray_id = new_ray;
            out.samples.push_back(copy);
        }
        rec.first_sample = first;
        out.rays.push_back(rec);
    }
    return out;
}

FieldSplit split_train_novel(const ExplicitField& field, const Partition& partition, std::uint64_t seed) {
    FieldSplit split;
    if (const auto* views = std::get_if<ViewPartition>(&partition)) {
        std::unordered_map<std::uint32_t, bool> is_train;
        for (std::uint32_t v : views->train) {
            is_train[v] = true;
        }
        for (std::uint32_t v : views->novel) {
            if (is_train.contains(v)) {
                throw ValidationError("partition: view " + std::to_string(v) + " is in both train and novel sets");
            }
            is_train[v] = false;
        }
        for (const auto& v : field.views) {
            if (!is_train.contains(v.view_id)) {
                throw ValidationError("partition: view " + std::to_string(v.view_id) + " is not assigned");
            }
        }
        for (const auto& [v, _] : is_train) {
            if (!field.find_view(v)) {
                throw ValidationError("partition: view " + std::to_string(v) + " does not exist");
            }
        }
        for (std::size_t r = 0; r < field.rays.size(); ++r) {
            (is_train.at(field.rays[r].view_id) ? split.train_rays : split.novel_rays)
                .push_back(static_cast<std::uint32_t>(r));
        }
    } else {
        const double fraction = std::get<RayFractionPartition>(partition).fraction;
        if (!(fraction > 0.0 && fraction < 1.0)) {
            throw ValidationError("partition: fraction must lie in (0, 1)");
        }
        for (const auto& view : field.views) {
            std::vector<std::uint32_t> members;
            for (std::size_t r = 0; r < field.rays.size(); ++r) {
                if (field.rays[r].view_id == view.view_id) {
                    members.push_back(static_cast<std::uint32_t>(r));
                }
            }
            // Fisher-Yates with a portable bounded draw; std::shuffle's
            // algorithm differs between standard libraries.
            RandomStream rng(derive_seed(seed, StreamTag::split, view.view_id));
            for (std::size_t i = members.size(); i > 1; --i) {
                std::swap(members[i - 1], members[rng.below(i)]);
            }
            const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(members.size())));
            std::vector<std::uint32_t> train(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
            std::vector<std::uint32_t> novel(members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
            std::sort(train.begin(), train.end());
            std::sort(novel.begin(), novel.end());
            split.train_rays.insert(split.train_rays.end(), train.begin(), train.end());
            split.novel_rays.insert(split.novel_rays.end(), novel.begin(), novel.end());
        }
    }
    split.train = select_rays(field, split.train_rays);
    split.novel = select_rays(field, split.novel_rays);
    return split;
}

namespace {

// Kept out of line: GCC 11 at -O3 folds the vectorised double->float->double
// round trip away for some lanes.
[[gnu::noinline]] double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

Vec3 f32(const Vec3& v) { return {f32(v.x), f32(v.y), f32(v.z)}; }

} // namespace

ExplicitField to_interchange_precision(const ExplicitField& field) {
    ExplicitField out = field;
    for (auto& v : out.views) {
        v.origin = f32(v.origin);
    }
    for (auto& r : out.rays) {
        r.origin = f32(r.origin);
        r.direction = f32(r.direction);
    }
    for (auto& s : out.samples) {
        s.t = f32(s.t);
        s.delta_prime = f32(s.delta_prime);
        s.position = f32(s.position);
        s.direction = out.rays[s.ray_id].direction;
        for (auto& c : s.colour) {
            c = f32(c);
        }
        s.density = f32(s.density);
    }
    return out;
}

} // namespace nerfgt
