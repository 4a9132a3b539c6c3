// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nerfgt/error.hpp"

namespace nerfgt {

Ray Camera::pixel_ray(std::uint32_t row, std::uint32_t col) const {
    const double tan_half = std::tan(0.5 * fov_y_deg * std::numbers::pi / 180.0);
    const double aspect = static_cast<double>(width) / static_cast<double>(height);
    const double x = ((static_cast<double>(col) + 0.5) / width * 2.0 - 1.0) * tan_half * aspect;
    const double y = (1.0 - (static_cast<double>(row) + 0.5) / height * 2.0) * tan_half;
    const Vec3 d{pose[0] * x + pose[1] * y - pose[2],
                 pose[4] * x + pose[5] * y - pose[6],
                 pose[8] * x + pose[9] * y - pose[10]};
    const double len = length(d);
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw ValidationError("camera produces a zero-length view direction");
    }
    Ray ray;
    ray.origin = position();
    ray.direction = d / len;
    ray.row = row;
    ray.col = col;
    return ray;
}

Mat4 look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 f = normalize(target - eye);
    const Vec3 side = cross(f, up);
    if (!(length(side) > 1e-12)) {
        throw ValidationError("look_at: up vector is parallel to the view direction");
    }
    const Vec3 x = normalize(side);
    const Vec3 y = cross(x, f);
    const Vec3 z = -f;
    return {x.x, y.x, z.x, eye.x,
            x.y, y.y, z.y, eye.y,
            x.z, y.z, z.z, eye.z,
            0.0, 0.0, 0.0, 1.0};
}

void validate_rigid(const Mat4& m, const std::string& where) {
    for (double v : m) {
        if (!std::isfinite(v)) {
            throw ValidationError(where + ": matrix has non-finite entries");
        }
    }
    if (m[12] != 0.0 || m[13] != 0.0 || m[14] != 0.0 || m[15] != 1.0) {
        throw ValidationError(where + ": last row must be (0, 0, 0, 1)");
    }
    // Columns of the rotation block must be orthonormal.
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            const double d = m[i] * m[j] + m[4 + i] * m[4 + j] + m[8 + i] * m[8 + j];
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(d - expected) > 1e-6) {
                throw ValidationError(where + ": rotation is not orthonormal");
            }
        }
    }
    const double det = m[0] * (m[5] * m[10] - m[6] * m[9]) - m[1] * (m[4] * m[10] - m[6] * m[8]) +
                       m[2] * (m[4] * m[9] - m[5] * m[8]);
    if (std::abs(det - 1.0) > 1e-6) {
        throw ValidationError(where + ": rotation determinant must be +1");
    }
}

const Vec3& surface_normal(const Surface& s) {
    return std::visit([](const auto& surf) -> const Vec3& { return surf.n; }, s);
}

std::uint32_t surface_material(const Surface& s) {
    return std::visit([](const auto& surf) { return surf.material_id; }, s);
}

std::optional<Hit> intersect_surface(const Ray& ray, const Surface& s, double t_max, double delta) {
    if (const auto* tri = std::get_if<TriangleSurface>(&s)) {
        return intersect_triangle(ray, *tri, t_max, delta);
    }
    return intersect_rect(ray, std::get<RectSurface>(s), t_max, delta);
}

const Material& Scene::material_of(std::uint32_t surface_id) const {
    return materials.at(surface_material(surfaces.at(surface_id)));
}

std::vector<Hit> Scene::intersect_all(const Ray& ray, double t_max, double delta, double t_min,
                                      std::size_t* duplicates) const {
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        auto hit = intersect_surface(ray, surfaces[i], t_max, delta);
        if (hit && hit->t > t_min) {
            hit->surface_id = static_cast<std::uint32_t>(i);
            hits.push_back(*hit);
        }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
    const auto last = std::unique(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t == b.t; });
    if (duplicates) {
        *duplicates += static_cast<std::size_t>(hits.end() - last);
    }
    hits.erase(last, hits.end());
    return hits;
}

std::optional<Hit> Scene::intersect_first(const Ray& ray, double t_max, double delta, double t_min) const {
    std::optional<Hit> best;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        auto hit = intersect_surface(ray, surfaces[i], t_max, delta);
        if (hit && hit->t > t_min && (!best || hit->t < best->t)) {
            hit->surface_id = static_cast<std::uint32_t>(i);
            best = hit;
        }
    }
    return best;
}

bool Scene::occluded(const Vec3& from, const Vec3& to, double epsilon) const {
    const Vec3 span = to - from;
    const double dist = length(span);
    if (!(dist > 2.0 * epsilon)) {
        return false;
    }
    Ray ray;
    ray.origin = from;
    ray.direction = span / dist;
    const double t_max = dist - epsilon;
    for (const auto& s : surfaces) {
        const auto hit = intersect_surface(ray, s, t_max, kDefaultDelta);
        if (hit && hit->t > epsilon) {
            return true;
        }
    }
    return false;
}

} // namespace nerfgt
