// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nerfgt/field.hpp"
#include "nerfgt/scene_io.hpp"
#include "nerfgt/shading.hpp"

namespace {

using namespace nerfgt;

Scene cuboids() {
    Scene scene;
    Material grey;
    grey.albedo = {0.7, 0.7, 0.7};
    scene.materials = {grey};
    scene.lights = {{"key", {3, 5, 4}, 1.0, 0.0}};
    PrimitiveOptions opts;
    opts.rects = true;
    for (const auto& [size, centre] : {std::pair<Vec3, Vec3>{{1, 2, 1}, {-1.5, 0, 0}},
                                       std::pair<Vec3, Vec3>{{1.2, 1.2, 1}, {0, -0.4, -1}},
                                       std::pair<Vec3, Vec3>{{0.8, 0.8, 1.4}, {1.4, -0.1, 0.5}}}) {
        auto faces = build_primitive(PrimitiveKind::box, scale_translate(size, centre), 0, opts);
        scene.surfaces.insert(scene.surfaces.end(), faces.begin(), faces.end());
    }
    return scene;
}

Camera camera(std::uint32_t res) {
    Camera c;
    c.pose = look_at({0, 1.2, 6.3}, {0, 0, 0});
    c.width = res;
    c.height = res;
    return c;
}

void BM_CastView(benchmark::State& state) {
    const Scene scene = cuboids();
    const Camera cam = camera(static_cast<std::uint32_t>(state.range(0)));
    SynthConfig cfg;
    cfg.t_max = 100.0;
    cfg.hit_mode = state.range(1) != 0 ? HitMode::earliest_hit : HitMode::all_hits;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cast_view(scene, cam, 0, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_CastView)->Args({64, 0})->Args({200, 0})->Args({200, 1})->Unit(benchmark::kMillisecond);

void BM_ShadeDiffuse(benchmark::State& state) {
    const Scene scene = cuboids();
    const std::vector<Camera> cams{camera(64)};
    SynthConfig cfg;
    cfg.t_max = 100.0;
    const ExplicitField field = generate_field(scene, cams, cfg);
    const ShaderSpec spec{"diffuse", ShaderKind::diffuse, static_cast<std::uint32_t>(state.range(0)), 1, 255.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(shade_diffuse(field, scene, spec, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(field.n_pts()));
}
BENCHMARK(BM_ShadeDiffuse)->Arg(1)->Arg(25)->Unit(benchmark::kMillisecond);

} // namespace
