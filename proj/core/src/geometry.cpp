// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/geometry.hpp"

#include <cmath>

#include "nerfgt/error.hpp"

namespace nerfgt {

namespace {

// Relative threshold on |e1 x e2|^2 / (|e1|^2 |e2|^2), i.e. sin^2 of the corner angle.
constexpr double kDegenerateSin2 = 1e-20;

} // namespace

TriangleSurface make_triangle(const Vec3& a, const Vec3& b, const Vec3& c, std::uint32_t material_id) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 nc = cross(e1, e2);
    const double scale = dot(e1, e1) * dot(e2, e2);
    if (!(scale > 0.0) || dot(nc, nc) <= kDegenerateSin2 * scale) {
        throw NumericError("degenerate triangle: vertices are collinear");
    }
    TriangleSurface tri;
    tri.a = a;
    tri.b = b;
    tri.c = c;
    tri.n = normalize(nc);
    tri.k = -dot(a, tri.n);
    tri.material_id = material_id;
    return tri;
}

RectSurface make_rect(const Vec3& corner, const Vec3& edge_u, const Vec3& edge_v, std::uint32_t material_id) {
    const double lu = length(edge_u);
    const double lv = length(edge_v);
    if (!(lu > 0.0) || !(lv > 0.0)) {
        throw ValidationError("rectangle edges must have non-zero length");
    }
    if (std::abs(dot(edge_u, edge_v)) > 1e-9 * lu * lv) {
        throw ValidationError("rectangle edges must be orthogonal");
    }
    RectSurface rect;
    rect.corner = corner;
    rect.edge_u = edge_u;
    rect.edge_v = edge_v;
    rect.n = normalize(cross(edge_u, edge_v));
    rect.k = -dot(corner, rect.n);
    rect.material_id = material_id;
    return rect;
}

std::optional<double> ray_plane_t(const Ray& ray, const Vec3& n, double k, double t_max) {
    const double dn = dot(ray.direction, n);
    if (std::abs(dn) <= kParallelEpsilon) {
        return std::nullopt;
    }
    const double t = -(dot(ray.origin, n) + k) / dn;
    if (!(t > 0.0) || t > t_max) {
        return std::nullopt;
    }
    return t;
}

Barycentric barycentric(const Vec3& point, const TriangleSurface& tri) {
    // Eliminating alpha = 1 - beta - gamma turns the 3x3 vertex system into a
    // least-squares problem over the two edge vectors; its normal equations are
    // singular exactly when the triangle is degenerate.
    const Vec3 e1 = tri.b - tri.a;
    const Vec3 e2 = tri.c - tri.a;
    const Vec3 w = point - tri.a;
    const double d11 = dot(e1, e1);
    const double d12 = dot(e1, e2);
    const double d22 = dot(e2, e2);
    const double det = d11 * d22 - d12 * d12;
    if (!(det > kDegenerateSin2 * d11 * d22)) {
        throw NumericError("degenerate triangle: barycentric system is singular");
    }
    const double w1 = dot(w, e1);
    const double w2 = dot(w, e2);
    Barycentric out;
    out.beta = (d22 * w1 - d12 * w2) / det;
    out.gamma = (d11 * w2 - d12 * w1) / det;
    out.alpha = 1.0 - out.beta - out.gamma;
    return out;
}

DeltaPrime delta_prime(double delta, const Vec3& d, const Vec3& n) {
    const double cosine = std::abs(dot(d, n)) / (length(d) * length(n));
    if (!(cosine >= kGrazingCosine)) {
        return {delta / kGrazingCosine, true};
    }
    return {delta / cosine, false};
}

Vec3 reflect(const Vec3& d, const Vec3& n) {
    return d - (2.0 * dot(d, n) / dot(n, n)) * n;
}

std::optional<Hit> intersect_triangle(const Ray& ray, const TriangleSurface& tri, double t_max, double delta) {
    const auto t = ray_plane_t(ray, tri.n, tri.k, t_max);
    if (!t) {
        return std::nullopt;
    }
    const Vec3 position = ray.origin + *t * ray.direction;
    const Barycentric bary = barycentric(position, tri);
    if (!bary.inside()) {
        return std::nullopt;
    }
    const DeltaPrime dp = delta_prime(delta, ray.direction, tri.n);
    Hit hit;
    hit.t = *t;
    hit.position = position;
    hit.coords = {bary.alpha, bary.beta, bary.gamma};
    hit.delta_prime = dp.value;
    hit.grazing = dp.grazing;
    return hit;
}

std::optional<Hit> intersect_rect(const Ray& ray, const RectSurface& rect, double t_max, double delta) {
    const auto t = ray_plane_t(ray, rect.n, rect.k, t_max);
    if (!t) {
        return std::nullopt;
    }
    const Vec3 position = ray.origin + *t * ray.direction;
    const Vec3 local = position - rect.corner;
    const double lu = length(rect.edge_u);
    const double lv = length(rect.edge_v);
    const double pu = dot(local, rect.edge_u) / lu;
    const double pv = dot(local, rect.edge_v) / lv;
    if (pu < 0.0 || pu > lu || pv < 0.0 || pv > lv) {
        return std::nullopt;
    }
    const DeltaPrime dp = delta_prime(delta, ray.direction, rect.n);
    Hit hit;
    hit.t = *t;
    hit.position = position;
    hit.coords = {pu / lu, pv / lv, 0.0};
    hit.delta_prime = dp.value;
    hit.grazing = dp.grazing;
    return hit;
}

} // namespace nerfgt
