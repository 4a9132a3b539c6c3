// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"
#include "files.hpp"
#include "nerfgt/complexity.hpp"
#include "nerfgt/dataset.hpp"
#include "nerfgt/metrics.hpp"
#include "nerfgt/scene_io.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace nerfgt;
using namespace nerfgt::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = NERFGT_TEST_DATA_DIR;

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// "key value" lines, optionally indented, into a map.
std::map<std::string, std::string> key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string key, value;
    while (in >> key >> value) {
        out[key] = value;
        in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    }
    return out;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::uint32_t> iota_ids(std::size_t n) {
    std::vector<std::uint32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = static_cast<std::uint32_t>(i);
    }
    return ids;
}

} // namespace

TEST_CASE("cli synthesize: minimal scene writes a valid dataset and renders") {
    TempDir dir("nerfgt_cli_minimal");
    const Result r = run_cli({"synthesize", "--scene", (kData / "minimal.json").string(), "--out", dir.path.string()});
    REQUIRE(r.code == 0);
    const Dataset ds = import_dataset(dir.path / "dataset");
    CHECK(ds.field.views.size() == 1);
    CHECK(ds.field.rays.size() == 256);
    CHECK(ds.meta.scene_hash == scene_hash(load_scene(kData / "minimal.json")));
    for (const char* f : {"view_000.png", "view_000.f32", "view_000.json"}) {
        CHECK(fs::is_regular_file(dir.path / "renders" / f));
    }
    const auto summary = nlohmann::json::parse(slurp(dir.path / "synthesis.json"));
    CHECK(summary["n_pts"].get<std::size_t>() == ds.field.n_pts());
}

TEST_CASE("cli synthesize: earliest-hit depths match the slab oracle") {
    TempDir dir("nerfgt_cli_cuboids");
    fs::create_directories(dir.path);
    save_scene(cuboid_scene(40), dir.path / "cuboids.json");
    const Result r = run_cli({"synthesize", "--scene", (dir.path / "cuboids.json").string(), "--out",
                              (dir.path / "run").string(), "--hit-mode", "earliest", "-q"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const Dataset ds = import_dataset(dir.path / "run" / "dataset");
    int hits = 0, misses = 0;
    for (const auto& rec : ds.field.rays) {
        const Ray ray = ds.meta.cameras[rec.view_id].pixel_ray(rec.row, rec.col);
        std::optional<double> best;
        for (const auto& c : three_cuboids()) {
            if (const auto t = oracle::slab_entry(ray.origin, ray.direction, c.lo, c.hi); t && (!best || *t < *best)) {
                best = t;
            }
        }
        REQUIRE(rec.sample_count == 1);
        const RaySample& s = ds.field.samples[rec.first_sample];
        if (best) {
            ++hits;
            CHECK_FALSE(s.is_empty_space);
            CHECK(s.t == doctest::Approx(*best).epsilon(1e-6));
        } else {
            ++misses;
            CHECK(s.is_empty_space);
            CHECK(s.t == ds.meta.t_max);
        }
    }
    CHECK(hits > 100);
    CHECK(misses > 100);
}

TEST_CASE("cli synthesize: a fixed seed reproduces every output byte") {
    TempDir a("nerfgt_cli_det_a");
    TempDir b("nerfgt_cli_det_b");
    const std::string scene = (kData / "cuboids.json").string();
    REQUIRE(run_cli({"synthesize", "--scene", scene, "--out", a.path.string(), "--seed", "11", "-q"}).code == 0);
    REQUIRE(run_cli({"synthesize", "--scene", scene, "--out", b.path.string(), "--seed", "11", "-q"}).code == 0);
    const auto ta = tree_contents(a.path);
    CHECK(ta.size() > 10);
    CHECK(ta == tree_contents(b.path));

    TempDir c("nerfgt_cli_det_c");
    REQUIRE(run_cli({"synthesize", "--scene", scene, "--out", c.path.string(), "--seed", "12", "-q"}).code == 0);
    CHECK(slurp(a.path / "dataset" / "sample_colour.bin") != slurp(c.path / "dataset" / "sample_colour.bin"));
}

TEST_CASE("cli synthesize: output root comes from the environment") {
    TempDir root("nerfgt_cli_env");
    ::setenv(cli::kOutputRootEnv, root.path.string().c_str(), 1);
    const Result r = run_cli({"synthesize", "--scene", (kData / "minimal.json").string(), "-q"});
    ::unsetenv(cli::kOutputRootEnv);
    REQUIRE(r.code == 0);
    CHECK(fs::is_regular_file(root.path / "minimal" / "dataset" / "manifest.json"));
}

TEST_CASE("cli complexity: published presets and the reflection flag") {
    const Result r = run_cli({"complexity", "--published"});
    REQUIRE(r.code == 0);
    const auto no_refl = r.out.substr(0, r.out.find("preset reflection"));
    const auto refl = r.out.substr(r.out.find("preset reflection"));
    CHECK(key_values(no_refl)["lambda"] == fmt17(2.0 * 25.0 * 256.0 / 255.0));
    CHECK(no_refl.find("reported_lambda 50 ok") != std::string::npos);
    CHECK(key_values(refl)["lambda"] == fmt17(2.0 * 25.0 * 256.0 / 255.0 + 256.0));
    CHECK(refl.find("reported_lambda 54 DISCREPANCY") != std::string::npos);
    CHECK(std::stod(key_values(no_refl)["task_complexity_from_gap"]) == doctest::Approx(3.68e8).epsilon(1e-12));
}

TEST_CASE("cli complexity: scene report equals the library report") {
    const fs::path scene = kData / "cuboids.json";
    const Result r = run_cli({"complexity", "--scene", scene.string(), "--seed", "3"});
    REQUIRE(r.code == 0);
    const SceneFile file = load_scene(scene);
    const ExplicitField field = generate_field(file.scene, file.cameras, file.synth);
    const FieldSplit split = split_train_novel(field, *file.partition, 3);
    const ComplexityReport want = complexity_report(file.shaders, file.scene.lights.size(), split.train, split.novel,
                                                    PositionBasis::origins, file.reported_lambda);
    auto kv = key_values(r.out);
    CHECK(kv["lambda"] == fmt17(want.lambda));
    CHECK(kv["n_pts"] == std::to_string(want.n_pts));
    CHECK(kv["task_complexity"] == fmt17(want.task));
    CHECK(kv["reported_lambda"] == "54");
    CHECK((r.out.find("DISCREPANCY") != std::string::npos) == want.lambda_discrepancy);

    const Result s = run_cli({"complexity", "--scene", scene.string(), "--basis", "samples"});
    REQUIRE(s.code == 0);
    CHECK(key_values(s.out)["std_train"] != kv["std_train"]);
}

TEST_CASE("cli complexity: a split with equal spreads has zero task complexity") {
    TempDir dir("nerfgt_cli_cx_zero");
    fs::create_directories(dir.path);
    SceneFile f = cuboid_scene(10);
    // All rays of one view share an origin, so each side has zero spread.
    f.cameras = {camera_at({0, 0, 6}, {0, 0, 0}, 10, 10), camera_at({0, 0, -6}, {0, 0, 0}, 10, 10)};
    f.partition = ViewPartition{{0}, {1}};
    save_scene(f, dir.path / "s.json");
    const Result r = run_cli({"complexity", "--scene", (dir.path / "s.json").string()});
    REQUIRE(r.code == 0);
    CHECK(std::stod(key_values(r.out)["task_complexity"]) == 0.0);
}

namespace {

struct EvalFixture {
    TempDir dir{"nerfgt_cli_eval"};
    Dataset ds;

    EvalFixture() {
        REQUIRE(run_cli({"synthesize", "--scene", (kData / "cuboids.json").string(), "--out",
                         (dir.path / "synth").string(), "-q"})
                    .code == 0);
        ds = import_dataset(dir.path / "synth" / "dataset");
    }

    Result evaluate(const std::vector<PredictionSet>& sets, const std::string& name,
                    const std::string& metrics = "wape,psnr,ssim") {
        export_predictions(dir.path / name, ds.meta.scene_hash, ds.field.n_pts(), iota_ids(ds.field.n_pts()), sets);
        return run_cli({"evaluate", "--dataset", (dir.path / "synth" / "dataset").string(), "--predictions",
                        (dir.path / name).string(), "--metrics", metrics, "--out", (dir.path / (name + "_out")).string()});
    }
};

} // namespace

TEST_CASE("cli evaluate: ground truth as predictions") {
    EvalFixture fx;
    std::vector<PredictionSet> sets;
    for (Parameter p : {Parameter::colour, Parameter::density, Parameter::depth}) {
        sets.push_back({p, ground_truth_values(fx.ds.field, p)});
    }
    const Result r = fx.evaluate(sets, "gt");
    REQUIRE(r.code == 0);
    std::map<std::string, std::pair<std::string, std::string>> table;
    std::istringstream in(r.out);
    std::string name, mean, sd, views;
    std::getline(in, name);
    CHECK(name == "metric mean std views");
    while (in >> name >> mean >> sd >> views) {
        table[name] = {mean, sd};
        CHECK(views == "3");
    }
    CHECK(table["wape_colour"].first == "0");
    CHECK(table["wape_density"].first == "0");
    CHECK(table["wape_depth"].first == "0");
    CHECK(table["psnr"].first == "99");
    CHECK(table["psnr"].second == "0");
    CHECK(table["ssim"].first == "1");

    // The CSV carries the same strings as the printed table.
    std::istringstream csv(slurp(fx.dir.path / "gt_out" / "metrics.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "metric,view,value");
    std::size_t checked = 0;
    while (std::getline(csv, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const std::string metric = line.substr(0, c1);
        const std::string view = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string value = line.substr(c2 + 1);
        REQUIRE(table.count(metric) == 1);
        if (view == "mean") {
            CHECK(value == table[metric].first);
            ++checked;
        } else if (view == "std") {
            CHECK(value == table[metric].second);
            ++checked;
        }
    }
    CHECK(checked == 2 * table.size());
}

TEST_CASE("cli evaluate: dyadic density offset gives its exact WAPE") {
    EvalFixture fx;
    std::vector<double> pred = ground_truth_values(fx.ds.field, Parameter::density);
    // Densities here are 0, 1 and float(0.4); shifting by -0.25 stays exact in float32.
    for (auto& v : pred) {
        v -= 0.25;
    }
    const Result r = fx.evaluate({{Parameter::density, pred}}, "offset", "wape");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("wape_density 0.25 0 3") != std::string::npos);
}

TEST_CASE("cli render: equals the synthesize render byte for byte") {
    TempDir dir("nerfgt_cli_render");
    const std::string scene = (kData / "cuboids.json").string();
    for (const char* mode : {"modified", "standard"}) {
        const fs::path synth = dir.path / (std::string("synth_") + mode);
        REQUIRE(run_cli({"synthesize", "--scene", scene, "--out", synth.string(), "--mode", mode, "-q"}).code == 0);
        for (const char* view : {"0", "2"}) {
            const fs::path out = dir.path / (std::string("render_") + mode + view);
            REQUIRE(run_cli({"render", "--dataset", (synth / "dataset").string(), "--view", view, "--mode", mode,
                             "--out", out.string(), "-q"})
                        .code == 0);
            const std::string stem = std::string("view_00") + view;
            CHECK(slurp(out / (stem + ".png")) == slurp(synth / "renders" / (stem + ".png")));
            CHECK(slurp(out / (stem + ".f32")) == slurp(synth / "renders" / (stem + ".f32")));
        }
    }
}

TEST_CASE("cli: exit codes follow the error category") {
    TempDir dir("nerfgt_cli_exit");
    fs::create_directories(dir.path);
    CHECK(run_cli({}).code == cli::kExitValidation);
    CHECK(run_cli({"bogus"}).code == cli::kExitValidation);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
    CHECK(run_cli({"synthesize"}).code == cli::kExitValidation);
    CHECK(run_cli({"synthesize", "--scene", "x.json", "--mode", "weird"}).code == cli::kExitValidation);

    const Result missing = run_cli({"synthesize", "--scene", (dir.path / "nope.json").string(), "--out",
                                    (dir.path / "o").string()});
    CHECK(missing.code == cli::kExitIo);
    CHECK(missing.err.find("error:") == 0);

    std::ofstream(dir.path / "bad.json") << "{\"version\": 1,";
    CHECK(run_cli({"synthesize", "--scene", (dir.path / "bad.json").string(), "--out", (dir.path / "o").string()})
              .code == cli::kExitValidation);
    CHECK(run_cli({"render", "--dataset", (dir.path / "none").string()}).code == cli::kExitIo);
    CHECK(run_cli({"complexity"}).code == cli::kExitValidation);
    CHECK(run_cli({"complexity", "--scene", (kData / "minimal.json").string()}).code == cli::kExitValidation);
}

TEST_CASE("cli evaluate: unknown metric names are rejected") {
    EvalFixture fx;
    const Result r = fx.evaluate({{Parameter::density, ground_truth_values(fx.ds.field, Parameter::density)}}, "m",
                                 "wape,lpips");
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("lpips") != std::string::npos);
}
