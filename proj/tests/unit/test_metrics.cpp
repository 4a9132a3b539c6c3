// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "generators.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/metrics.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace nerfgt;
using namespace nerfgt::testing;

namespace {

ExplicitField metric_field() {
    const SceneFile file = cuboid_scene(16);
    SynthConfig cfg = file.synth;
    cfg.hit_mode = HitMode::all_hits;
    return generate_field(file.scene, file.cameras, cfg);
}

/// Field with dyadic sample values so that |x + k - x| == |k| holds exactly.
ExplicitField dyadic_field(Gen& gen) {
    ExplicitField f = metric_field();
    for (auto& s : f.samples) {
        for (auto& c : s.colour) {
            c = gen.integer(0, 64) / 128.0;
        }
        s.density = gen.integer(0, 64) / 128.0;
    }
    return f;
}

Image random_image(Gen& gen, std::uint32_t w, std::uint32_t h) {
    Image img(w, h);
    for (auto& px : img.pixels) {
        px = {gen.uniform(), gen.uniform(), gen.uniform()};
    }
    return img;
}

} // namespace

TEST_CASE("parameter names round-trip") {
    for (Parameter p : {Parameter::colour, Parameter::density, Parameter::depth, Parameter::delta}) {
        CHECK(parse_parameter(parameter_name(p)) == p);
    }
    CHECK_THROWS_AS(parse_parameter("albedo"), ValidationError);
}

TEST_CASE("wape: identity gives zero for every view") {
    const ExplicitField f = metric_field();
    for (Parameter p : {Parameter::colour, Parameter::density, Parameter::depth, Parameter::delta}) {
        const MetricReport r = wape({p, ground_truth_values(f, p)}, f);
        CHECK(r.per_view.size() == 3);
        for (double v : r.per_view) {
            CHECK(v == 0.0);
        }
        CHECK(r.mean == 0.0);
        CHECK(r.stddev == 0.0);
    }
}

TEST_CASE("wape: constant offset is detected exactly") {
    Gen gen(41);
    const ExplicitField f = dyadic_field(gen);
    for (double k : {0.125, -0.25, 0.5}) {
        for (Parameter p : {Parameter::colour, Parameter::density}) {
            auto values = ground_truth_values(f, p);
            for (auto& v : values) {
                v += k;
            }
            const MetricReport r = wape({p, values}, f);
            for (double v : r.per_view) {
                CHECK(v == std::abs(k));
            }
            CHECK(r.mean == std::abs(k));
            CHECK(r.stddev == 0.0);
        }
    }
    // Non-dyadic offsets agree to rounding.
    const ExplicitField g = metric_field();
    auto depth = ground_truth_values(g, Parameter::depth);
    for (auto& v : depth) {
        v += 0.1;
    }
    CHECK(wape({Parameter::depth, depth}, g).mean == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("wape: matches brute-force MAE and per-view aggregation oracles") {
    Gen gen(42);
    const ExplicitField f = metric_field();
    for (Parameter p : {Parameter::colour, Parameter::density, Parameter::depth}) {
        const int ch = parameter_channels(p);
        auto truth = ground_truth_values(f, p);
        std::vector<double> pred(truth.size());
        for (double& v : pred) {
            v = gen.uniform(-1, 2);
        }
        std::map<std::uint32_t, std::pair<double, double>> acc;
        for (std::size_t i = 0; i < f.samples.size(); ++i) {
            for (int c = 0; c < ch; ++c) {
                acc[f.samples[i].view_id].first += std::abs(truth[i * ch + c] - pred[i * ch + c]);
                acc[f.samples[i].view_id].second += 1.0;
            }
        }
        std::vector<double> per_view;
        for (const auto& [view, sc] : acc) {
            per_view.push_back(sc.first / sc.second);
        }
        const auto [mean, sd] = oracle::mean_std(per_view);
        const MetricReport r = wape({p, pred}, f);
        REQUIRE(r.per_view.size() == per_view.size());
        for (std::size_t v = 0; v < per_view.size(); ++v) {
            CHECK(std::abs(r.per_view[v] - per_view[v]) < 1e-12);
        }
        CHECK(std::abs(r.mean - mean) < 1e-12);
        CHECK(std::abs(r.stddev - sd) < 1e-12);
        CHECK(r.mean >= *std::min_element(r.per_view.begin(), r.per_view.end()));
        CHECK(r.mean <= *std::max_element(r.per_view.begin(), r.per_view.end()));
    }
}

TEST_CASE("wape: permutation invariance within a view and misalignment errors") {
    Gen gen(43);
    ExplicitField f = metric_field();
    auto pred = ground_truth_values(f, Parameter::density);
    for (double& v : pred) {
        v = gen.uniform();
    }
    const MetricReport before = wape({Parameter::density, pred}, f);
    // Swap two samples of view 0 together with their predictions.
    std::size_t a = 0;
    std::size_t b = 0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        if (f.samples[i].view_id == 0) {
            b = i;
        }
    }
    std::swap(f.samples[a], f.samples[b]);
    std::swap(pred[a], pred[b]);
    const MetricReport after = wape({Parameter::density, pred}, f);
    CHECK(after.per_view[0] == doctest::Approx(before.per_view[0]).epsilon(1e-14));

    pred.pop_back();
    CHECK_THROWS_AS(wape({Parameter::density, pred}, f), ValidationError);
    pred.push_back(std::nan(""));
    CHECK_THROWS_AS(wape({Parameter::density, pred}, f), ValidationError);
}

TEST_CASE("make_report: population statistics") {
    const MetricReport r = make_report("x", {0, 1, 2, 3}, {1, 2, 3, 4});
    CHECK(r.mean == 2.5);
    CHECK(r.stddev == doctest::Approx(std::sqrt(1.25)));
    const MetricReport inf = make_report("p", {0, 1}, {INFINITY, INFINITY});
    CHECK(std::isinf(inf.mean));
    CHECK(inf.stddev == 0.0);
}

TEST_CASE("psnr: sentinel, direct formula and log law") {
    Gen gen(44);
    const Image a = random_image(gen, 8, 8);
    CHECK(std::isinf(psnr(a, a)));
    Image z(1, 1, {0, 0, 0});
    Image h(1, 1, {0.5, 0.5, 0.5});
    CHECK(psnr(z, h) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
    CHECK(psnr(z, h) == doctest::Approx(6.0206).epsilon(1e-5));
    Image b = a;
    Image half = a;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            const double e = gen.uniform(-0.2, 0.2);
            b.pixels[i][ch] += e;
            half.pixels[i][ch] += 0.5 * e;
        }
    }
    CHECK(psnr(a, half) - psnr(a, b) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(psnr(a, Image(8, 7)), ValidationError);
}

TEST_CASE("psnr: strictly decreasing in MSE") {
    Image a(4, 4, {0.5, 0.5, 0.5});
    double prev = INFINITY;
    for (int step = 1; step <= 20; ++step) {
        Image b(4, 4, {0.5 + 0.02 * step, 0.5, 0.5});
        const double p = psnr(a, b);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("ssim: identity, symmetry, constant images, size check") {
    Gen gen(45);
    const Image a = random_image(gen, 24, 20);
    const Image b = random_image(gen, 24, 20);
    CHECK(ssim(a, a) == 1.0);
    CHECK(std::abs(ssim(a, b) - ssim(b, a)) < 1e-12);
    CHECK(ssim(a, b) < 0.5);
    CHECK_THROWS_AS(ssim(Image(10, 10), Image(10, 10)), ValidationError);
    CHECK_THROWS_AS(ssim(a, Image(24, 19)), ValidationError);

    // Constant images: variances vanish, leaving the luminance term.
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    for (auto [x, y] : {std::pair{0.5, 0.5}, std::pair{0.2, 0.7}, std::pair{0.0, 1.0}}) {
        const double expected = (2 * x * y + c1) / (x * x + y * y + c1) * (c2 / c2);
        CHECK(ssim(Image(16, 16, {x, x, x}), Image(16, 16, {y, y, y})) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("ssim: matches a direct single-window evaluation on an 11x11 image") {
    Gen gen(46);
    const Image a = random_image(gen, 11, 11);
    const Image b = random_image(gen, 11, 11);
    double w[11];
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        w[i] = std::exp(-((i - 5) * (i - 5)) / (2 * 1.5 * 1.5));
        sum += w[i];
    }
    double total = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
        double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
        for (int y = 0; y < 11; ++y) {
            for (int x = 0; x < 11; ++x) {
                const double g = w[x] * w[y] / (sum * sum);
                const double va = a.at(y, x)[ch];
                const double vb = b.at(y, x)[ch];
                ma += g * va;
                mb += g * vb;
                saa += g * va * va;
                sbb += g * vb * vb;
                sab += g * va * vb;
            }
        }
        const double c1 = 1e-4, c2 = 9e-4;
        total += (2 * ma * mb + c1) * (2 * (sab - ma * mb) + c2) /
                 ((ma * ma + mb * mb + c1) * ((saa - ma * ma) + (sbb - mb * mb) + c2));
    }
    CHECK(ssim(a, b) == doctest::Approx(total / 3.0).epsilon(1e-10));
}

TEST_CASE("depth_psnr: sentinel, uniform offset, random oracle") {
    const ExplicitField f = metric_field();
    auto depth = ground_truth_values(f, Parameter::depth);
    for (double v : depth_psnr({Parameter::depth, depth}, f, 100.0).per_view) {
        CHECK(std::isinf(v));
    }
    auto shifted = depth;
    for (double& v : shifted) {
        v += 1.0;
    }
    for (double v : depth_psnr({Parameter::depth, shifted}, f, 100.0).per_view) {
        CHECK(v == doctest::Approx(40.0).epsilon(1e-9));
    }
    Gen gen(47);
    auto noisy = depth;
    for (double& v : noisy) {
        v += gen.uniform(-3, 3);
    }
    std::map<std::uint32_t, std::pair<double, double>> acc;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        acc[f.samples[i].view_id].first += (noisy[i] - depth[i]) * (noisy[i] - depth[i]);
        acc[f.samples[i].view_id].second += 1.0;
    }
    const MetricReport r = depth_psnr({Parameter::depth, noisy}, f, 100.0);
    std::size_t v = 0;
    for (const auto& [view, sc] : acc) {
        CHECK(std::abs(r.per_view[v++] - 10.0 * std::log10(1e4 / (sc.first / sc.second))) < 1e-9);
    }
    CHECK_THROWS_AS(depth_psnr({Parameter::colour, ground_truth_values(f, Parameter::colour)}, f, 100.0),
                    ValidationError);
}

TEST_CASE("apply_predictions: substitutes values and keeps rays sorted") {
    const ExplicitField f = metric_field();
    std::vector<PredictionSet> sets{{Parameter::colour, ground_truth_values(f, Parameter::colour)},
                                    {Parameter::density, ground_truth_values(f, Parameter::density)}};
    CHECK(apply_predictions(f, sets) == f);
    auto depth = ground_truth_values(f, Parameter::depth);
    std::reverse(depth.begin(), depth.end());
    const std::vector<PredictionSet> depth_set{{Parameter::depth, depth}};
    const ExplicitField g = apply_predictions(f, depth_set);
    for (std::size_t r = 0; r < g.rays.size(); ++r) {
        const auto s = g.ray_samples(r);
        CHECK(std::is_sorted(s.begin(), s.end(), [](const RaySample& a, const RaySample& b) { return a.t < b.t; }));
    }
}
