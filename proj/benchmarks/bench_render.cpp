// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "nerfgt/metrics.hpp"
#include "nerfgt/render.hpp"

namespace {

using namespace nerfgt;

std::vector<RaySample> ray_samples(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RaySample> out(n);
    double t = 0.0;
    for (auto& s : out) {
        t += 0.01 + u(rng);
        s.t = t;
        s.density = u(rng);
        s.delta_prime = 0.001 + 0.1 * u(rng);
        s.colour = {u(rng), u(rng), u(rng)};
    }
    return out;
}

void BM_CompositeRay(benchmark::State& state) {
    const auto samples = ray_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(composite_ray(samples, OpacityRule::modified));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompositeRay)->Arg(1)->Arg(8)->Arg(64);

Image noise_image(std::uint32_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Image img(size, size);
    for (auto& p : img.pixels) {
        p = {u(rng), u(rng), u(rng)};
    }
    return img;
}

void BM_Ssim(benchmark::State& state) {
    const auto size = static_cast<std::uint32_t>(state.range(0));
    const Image a = noise_image(size, 1);
    const Image b = noise_image(size, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssim(a, b));
    }
    state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace
