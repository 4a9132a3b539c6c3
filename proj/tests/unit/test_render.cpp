// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "generators.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/image_io.hpp"
#include "nerfgt/render.hpp"
#include "nerfgt/shading.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace nerfgt;
using namespace nerfgt::testing;

namespace {

RaySample make_sample(double t, double sigma, double delta, Rgb c) {
    RaySample s;
    s.t = t;
    s.density = sigma;
    s.delta_prime = delta;
    s.colour = c;
    return s;
}

std::vector<RaySample> random_ray(Gen& gen, int count) {
    std::vector<RaySample> out;
    double t = 0.0;
    for (int i = 0; i < count; ++i) {
        t += gen.uniform(0.01, 2.0);
        out.push_back(make_sample(t, gen.uniform(0.0, 1.0), gen.uniform(0.001, 0.5),
                                  {gen.uniform(), gen.uniform(), gen.uniform()}));
    }
    return out;
}

} // namespace

TEST_CASE("composite_ray: zero density gives black") {
    const std::vector<RaySample> s{make_sample(1, 0, 0.1, {1, 1, 1}), make_sample(2, 0, 0.1, {0.5, 0.2, 1})};
    CHECK(composite_ray(s, OpacityRule::modified) == Rgb{0, 0, 0});
    CHECK(composite_ray(s, OpacityRule::standard) == Rgb{0, 0, 0});
    CHECK(composite_ray({}, OpacityRule::modified) == Rgb{0, 0, 0});
}

TEST_CASE("composite_ray: opaque limit returns the first colour") {
    const Rgb c{0.3, 0.6, 0.9};
    std::vector<RaySample> s{make_sample(1, 50, 1.0, c), make_sample(2, 1, 1.0, {1, 1, 1})};
    for (OpacityRule rule : {OpacityRule::modified, OpacityRule::standard}) {
        const Rgb out = composite_ray(s, rule);
        for (int ch = 0; ch < 3; ++ch) {
            CHECK(std::abs(out[ch] - c[ch]) < 1e-6);
        }
    }
}

TEST_CASE("composite_ray: two-sample hand expansion in modified mode") {
    const Rgb c1{0.2, 0.4, 0.6};
    const Rgb c2{0.9, 0.1, 0.5};
    const std::vector<RaySample> s{make_sample(1, 1, 0.001, c1), make_sample(2, 1, 0.001, c2)};
    const Rgb out = composite_ray(s, OpacityRule::modified);
    const double a = 1.0 - std::exp(-1.0);
    for (int ch = 0; ch < 3; ++ch) {
        CHECK(std::abs(out[ch] - (a * c1[ch] + std::exp(-0.001) * a * c2[ch])) < 1e-15);
    }
}

TEST_CASE("composite_ray: unsorted input is rejected") {
    const std::vector<RaySample> s{make_sample(2, 1, 0.1, {1, 1, 1}), make_sample(1, 1, 0.1, {1, 1, 1})};
    CHECK_THROWS_AS(composite_ray(s, OpacityRule::modified), ValidationError);
}

TEST_CASE("composite_ray: literal oracle and zero-density insertion on random rays") {
    Gen gen(31);
    for (int i = 0; i < 500; ++i) {
        auto s = random_ray(gen, gen.integer(1, 8));
        for (bool modified : {true, false}) {
            const OpacityRule rule = modified ? OpacityRule::modified : OpacityRule::standard;
            const Rgb got = composite_ray(s, rule);
            const Rgb want = oracle::literal_composite(s, modified);
            for (int ch = 0; ch < 3; ++ch) {
                CHECK(std::abs(got[ch] - want[ch]) < 1e-12);
            }
            auto with_zero = s;
            const std::size_t at = static_cast<std::size_t>(gen.integer(0, static_cast<int>(s.size())));
            const double t = at == 0 ? s[0].t * 0.5 : (at == s.size() ? s.back().t + 1.0 : 0.5 * (s[at - 1].t + s[at].t));
            with_zero.insert(with_zero.begin() + static_cast<std::ptrdiff_t>(at),
                             make_sample(t, 0.0, gen.uniform(0.001, 1.0), {gen.uniform(), gen.uniform(), gen.uniform()}));
            CHECK(composite_ray(with_zero, rule) == got);
        }
    }
}

TEST_CASE("composite_ray: transmittance is non-increasing and modes agree at delta' = 1") {
    Gen gen(32);
    for (int i = 0; i < 200; ++i) {
        auto s = random_ray(gen, 8);
        double prev = 1.0;
        double depth = 0.0;
        for (const auto& x : s) {
            const double transmittance = std::exp(-depth);
            CHECK(transmittance <= prev);
            prev = transmittance;
            depth += x.density * x.delta_prime;
        }
        for (auto& x : s) {
            x.delta_prime = 1.0;
        }
        CHECK(composite_ray(s, OpacityRule::modified) == composite_ray(s, OpacityRule::standard));
        for (const auto& x : s) {
            CHECK(sample_opacity(x, OpacityRule::modified) == sample_opacity(x, OpacityRule::standard));
        }
    }
}

TEST_CASE("render_view: empty scene renders the background") {
    const std::vector<Camera> cams{camera_at({0, 0, 5}, {0, 0, 0}, 4, 3)};
    const ExplicitField f = generate_field(Scene{}, cams, SynthConfig{});
    const Image img = render_view(f, 0, OpacityRule::modified);
    CHECK(img == Image(4, 3, {0, 0, 0}));
    CHECK_THROWS_AS(render_view(f, 9, OpacityRule::modified), ValidationError);
}

TEST_CASE("render_view: opaque full-frame white rect under a head-on light") {
    Scene scene;
    scene.materials = {solid("white", {1, 1, 1})};
    scene.surfaces.emplace_back(make_rect({-10, -10, -1}, {20, 0, 0}, {0, 20, 0}, 0));
    Camera cam;
    cam.width = 6;
    cam.height = 5;
    // A unit-intensity light with the same normal incidence everywhere: a broad plane
    // wave is modelled by a distant light whose cosine is 1 to within 1e-12.
    scene.lights = {{"sun", {0, 0, 1e7}, 1.0, 0.0}};
    const std::vector<Camera> cams{cam};
    ExplicitField f = generate_field(scene, cams, SynthConfig{});
    f = shade_diffuse(f, scene, {"d", ShaderKind::diffuse, 1, 1, 256.0}, 0);
    // Solid density is 1, so the modified opacity saturates at 1 - exp(-1).
    const double level = 1.0 - std::exp(-1.0);
    const Image img = render_view(f, 0, OpacityRule::modified);
    for (const auto& px : img.pixels) {
        for (double ch : px) {
            CHECK(ch == doctest::Approx(level).epsilon(1e-9));
        }
    }
    // With delta' = 1 the standard rule sees the same optical depth.
    for (auto& s : f.samples) {
        s.delta_prime = 1.0;
    }
    CHECK(render_view(f, 0, OpacityRule::standard) == render_view(f, 0, OpacityRule::modified));
    // A dense sample reaches white.
    for (auto& s : f.samples) {
        s.density = 1.0;
        s.delta_prime = 50.0;
    }
    for (const auto& px : render_view(f, 0, OpacityRule::standard).pixels) {
        CHECK(px[0] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("render_view: equals per-pixel composite and counts missing pixels") {
    const SceneFile file = cuboid_scene(20);
    SynthConfig cfg = file.synth;
    cfg.hit_mode = HitMode::all_hits;
    ExplicitField f = generate_field(file.scene, file.cameras, cfg);
    f = shade_diffuse(f, file.scene, file.shaders[0], 4);
    for (std::uint32_t v = 0; v < 3; ++v) {
        const Image img = render_view(f, v, OpacityRule::modified);
        for (std::size_t r = 0; r < f.rays.size(); ++r) {
            if (f.rays[r].view_id == v) {
                CHECK(img.at(f.rays[r].row, f.rays[r].col) == composite_ray(f.ray_samples(r), OpacityRule::modified));
            }
        }
    }
    const FieldSplit split = split_train_novel(f, RayFractionPartition{0.5}, 1);
    RenderDiagnostics diag;
    const Rgb bg{0.5, 0.5, 0.5};
    const Image partial = render_view(split.train, 0, OpacityRule::modified, bg, &diag);
    CHECK(diag.missing_pixels == 200);
    CHECK(std::count(partial.pixels.begin(), partial.pixels.end(), bg) >= 200);
}

TEST_CASE("image_io: float dump round-trips and PNG is written") {
    Gen gen(33);
    Image img(13, 7);
    for (auto& px : img.pixels) {
        px = {static_cast<float>(gen.uniform()), static_cast<float>(gen.uniform()), static_cast<float>(gen.uniform())};
    }
    const auto dir = std::filesystem::temp_directory_path() / "nerfgt_image_io_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_float_image(img, dir / "view");
    CHECK(read_float_image(dir / "view") == img);
    write_png(img, dir / "view.png");
    CHECK(std::filesystem::file_size(dir / "view.png") > 0);
    // Corrupting the dump is detected by its checksum.
    {
        std::FILE* fp = std::fopen((dir / "view.f32").string().c_str(), "r+b");
        REQUIRE(fp);
        std::fputc(0x7f, fp);
        std::fclose(fp);
    }
    CHECK_THROWS_AS(read_float_image(dir / "view"), ValidationError);
    CHECK_THROWS_AS(read_float_image(dir / "missing"), IoError);
    std::filesystem::remove_all(dir);
}
