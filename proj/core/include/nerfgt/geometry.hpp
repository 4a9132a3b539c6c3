// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

#include "nerfgt/vec3.hpp"

namespace nerfgt {

/// Rays with |d.n| at or below this are treated as parallel to a plane.
inline constexpr double kParallelEpsilon = 1e-9;
/// Smallest |cos| between ray and normal used when stretching sample thickness.
inline constexpr double kGrazingCosine = 1e-6;
/// Default nominal sample thickness.
inline constexpr double kDefaultDelta = 0.001;

inline constexpr std::uint32_t kNoSurface = std::numeric_limits<std::uint32_t>::max();

struct Ray {
    Vec3 origin;
    Vec3 direction; // unit length
    std::uint32_t view_id = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
};

/// Planar triangle with precomputed plane. Points p on the plane satisfy dot(p, n) + k = 0.
struct TriangleSurface {
    Vec3 a, b, c;
    Vec3 n;
    double k = 0.0;
    std::uint32_t material_id = 0;
};

/// Rectangle spanned by two orthogonal edges from `corner`.
struct RectSurface {
    Vec3 corner;
    Vec3 edge_u, edge_v;
    Vec3 n;
    double k = 0.0;
    std::uint32_t material_id = 0;
};

/// Builds a triangle from CCW vertices. Throws NumericError for collinear vertices.
TriangleSurface make_triangle(const Vec3& a, const Vec3& b, const Vec3& c, std::uint32_t material_id = 0);

/// Builds a rectangle; n = normalize(edge_u x edge_v). Throws ValidationError for
/// non-orthogonal or zero-length edges.
RectSurface make_rect(const Vec3& corner, const Vec3& edge_u, const Vec3& edge_v,
                      std::uint32_t material_id = 0);

struct Barycentric {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    /// Strict containment: points exactly on an edge are outside.
    bool inside() const { return alpha > 0.0 && beta > 0.0 && gamma > 0.0; }
};

struct DeltaPrime {
    double value = 0.0;
    bool grazing = false; // clamped at kGrazingCosine
};

struct Hit {
    double t = 0.0;
    Vec3 position;
    /// (alpha, beta, gamma) for triangles, (u, v, 0) edge parameters for rectangles.
    std::array<double, 3> coords{};
    std::uint32_t surface_id = kNoSurface;
    double delta_prime = 0.0;
    bool grazing = false;
};

std::optional<double> ray_plane_t(const Ray& ray, const Vec3& n, double k,
                                  double t_max = std::numeric_limits<double>::infinity());

/// Solves r = alpha*a + beta*b + gamma*c with alpha + beta + gamma = 1.
/// Throws NumericError when the triangle is degenerate.
Barycentric barycentric(const Vec3& point, const TriangleSurface& tri);

DeltaPrime delta_prime(double delta, const Vec3& d, const Vec3& n);

Vec3 reflect(const Vec3& d, const Vec3& n);

std::optional<Hit> intersect_triangle(const Ray& ray, const TriangleSurface& tri, double t_max,
                                      double delta = kDefaultDelta);

std::optional<Hit> intersect_rect(const Ray& ray, const RectSurface& rect, double t_max,
                                  double delta = kDefaultDelta);

} // namespace nerfgt
