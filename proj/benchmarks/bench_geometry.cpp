// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "nerfgt/scene.hpp"
#include "nerfgt/scene_io.hpp"

namespace {

using namespace nerfgt;

std::vector<Ray> random_rays(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Ray> rays(n);
    for (auto& r : rays) {
        r.origin = {u(rng) * 0.2, u(rng) * 0.2, 5.0};
        r.direction = normalize(Vec3{u(rng) * 0.3, u(rng) * 0.3, -1.0});
    }
    return rays;
}

void BM_IntersectTriangle(benchmark::State& state) {
    const TriangleSurface tri = make_triangle({-1, -1, 0}, {1, -1, 0}, {0, 1, 0});
    const auto rays = random_rays(1024, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(intersect_triangle(rays[i++ & 1023], tri, 100.0));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IntersectTriangle);

void BM_IntersectRect(benchmark::State& state) {
    const RectSurface rect = make_rect({-1, -1, 0}, {2, 0, 0}, {0, 2, 0});
    const auto rays = random_rays(1024, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(intersect_rect(rays[i++ & 1023], rect, 100.0));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IntersectRect);

// Linear scan over a tessellated sphere; the argument is the segment count.
void BM_SceneIntersectAll(benchmark::State& state) {
    Scene scene;
    scene.materials = {Material{}};
    PrimitiveOptions opts;
    opts.segments = static_cast<std::uint32_t>(state.range(0));
    opts.rings = opts.segments / 2;
    scene.surfaces = build_primitive(PrimitiveKind::uv_sphere, identity_matrix(), 0, opts);
    const auto rays = random_rays(1024, 3);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scene.intersect_all(rays[i++ & 1023], 100.0, kDefaultDelta));
    }
    state.SetItemsProcessed(state.iterations());
    state.counters["surfaces"] = static_cast<double>(scene.surfaces.size());
}
BENCHMARK(BM_SceneIntersectAll)->Arg(8)->Arg(16)->Arg(32);

} // namespace
