// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "nerfgt/complexity.hpp"
#include "nerfgt/dataset.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/field.hpp"
#include "nerfgt/image_io.hpp"
#include "nerfgt/metrics.hpp"
#include "nerfgt/render.hpp"
#include "nerfgt/scene_io.hpp"
#include "nerfgt/shading.hpp"

namespace nerfgt::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string scene;
    std::string out;
    std::uint64_t seed = kDefaultSeed;
    std::string mode = "modified";
    std::string hit_mode;
    std::string metrics = "wape,psnr,ssim";
    std::string basis = "origins";
    std::string dataset;
    std::string predictions;
    std::uint32_t view = 0;
    std::optional<double> fraction;
    bool published = false;
    bool quiet = false;
};

OpacityRule parse_rule(const std::string& s) { return s == "standard" ? OpacityRule::standard : OpacityRule::modified; }

PositionBasis parse_basis(const std::string& s) {
    return s == "samples" ? PositionBasis::samples : PositionBasis::origins;
}

std::string view_stem(std::uint32_t view) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "view_%03u", view);
    return buf;
}

// Shortest round-trippable decimal form, shared by tables and CSV files.
std::string fmt(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

fs::path resolve_out(const std::string& given, const std::string& default_leaf) {
    fs::path dir;
    if (!given.empty()) {
        dir = given;
    } else if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
        dir = fs::path(root) / default_leaf;
    } else {
        dir = fs::path("nerfgt_out") / default_leaf;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

void write_view(const Image& image, const fs::path& dir, std::uint32_t view) {
    write_png(image, dir / (view_stem(view) + ".png"));
    write_float_image(image, dir / view_stem(view));
}

int cmd_synthesize(const Options& o, std::ostream& out, std::ostream& err) {
    SceneFile file = load_scene(o.scene);
    if (o.hit_mode == "all") {
        file.synth.hit_mode = HitMode::all_hits;
    } else if (o.hit_mode == "earliest") {
        file.synth.hit_mode = HitMode::earliest_hit;
    }
    const fs::path dir = resolve_out(o.out, fs::path(o.scene).stem().string());

    SynthDiagnostics synth_diag;
    ExplicitField field = generate_field(file.scene, file.cameras, file.synth, &synth_diag);
    ShadeDiagnostics shade_diag;
    field = apply_shaders(field, file.scene, file.shaders, file.synth, o.seed, &shade_diag);
    for (const auto& w : shade_diag.warnings) {
        err << "warning: " << w << "\n";
    }
    // Renders come from the interchange-precision field so that re-rendering the
    // exported dataset reproduces them exactly.
    field = to_interchange_precision(field);

    DatasetMeta meta;
    meta.scene_hash = scene_hash(file);
    meta.seed = o.seed;
    meta.t_max = file.synth.t_max;
    meta.cameras = file.cameras;
    if (file.partition) {
        const FieldSplit split = split_train_novel(field, *file.partition, o.seed);
        meta.train_rays = split.train_rays;
        meta.novel_rays = split.novel_rays;
    }
    export_dataset(field, meta, dir / "dataset");

    const OpacityRule rule = parse_rule(o.mode);
    const fs::path renders = dir / "renders";
    fs::create_directories(renders);
    for (const auto& v : field.views) {
        write_view(render_view(field, v.view_id, rule, file.synth.background), renders, v.view_id);
    }

    ordered_json summary;
    summary["scene_hash"] = meta.scene_hash;
    summary["seed"] = o.seed;
    summary["hit_mode"] = file.synth.hit_mode == HitMode::all_hits ? "all" : "earliest";
    summary["render_mode"] = o.mode;
    summary["n_views"] = field.views.size();
    summary["n_rays"] = field.rays.size();
    summary["n_pts"] = field.n_pts();
    summary["empty_rays"] = synth_diag.empty_rays;
    summary["duplicate_hits"] = synth_diag.duplicate_hits;
    summary["grazing_samples"] = synth_diag.grazing_samples;
    summary["train_rays"] = meta.train_rays.size();
    summary["novel_rays"] = meta.novel_rays.size();
    summary["warnings"] = shade_diag.warnings;
    write_text(dir / "synthesis.json", summary.dump(2) + "\n");

    if (!o.quiet) {
        out << "views " << field.views.size() << ", rays " << field.rays.size() << ", samples " << field.n_pts()
            << " (" << synth_diag.empty_rays << " empty, " << synth_diag.duplicate_hits << " duplicate hits dropped)\n";
        out << "wrote " << dir.string() << "\n";
    }
    return kExitOk;
}

void print_report(std::ostream& out, const ComplexityReport& r) {
    for (const auto& t : r.terms) {
        out << "shader " << t.name << " " << fmt(t.value) << "\n";
    }
    out << "lambda " << fmt(r.lambda) << "\n";
    if (r.reported_lambda) {
        out << "reported_lambda " << fmt(*r.reported_lambda) << (r.lambda_discrepancy ? " DISCREPANCY" : " ok")
            << "\n";
    }
    out << "n_pts " << r.n_pts << "\n";
    out << "std_train " << fmt(r.std_train) << "\n";
    out << "std_novel " << fmt(r.std_novel) << "\n";
    out << "task_complexity " << fmt(r.task) << "\n";
}

int cmd_published(const Options& o, std::ostream& out) {
    ordered_json doc = ordered_json::array();
    for (const auto& p : published_presets()) {
        const double lambda = shader_complexity(p.shaders);
        const bool flag = std::abs(lambda - p.reported_lambda) > kLambdaTolerance;
        // Spread gap implied by the reported triple, then fed back through the formula.
        const double gap = p.reported_task / (p.reported_n_pts * p.reported_lambda);
        const double task = task_complexity(p.reported_n_pts, p.reported_lambda, gap, 0.0);
        out << "preset " << p.name << "\n";
        out << "  lambda " << fmt(lambda) << "\n";
        out << "  reported_lambda " << fmt(p.reported_lambda) << (flag ? " DISCREPANCY" : " ok") << "\n";
        out << "  reported_task_complexity " << fmt(p.reported_task) << "\n";
        out << "  implied_std_gap " << fmt(gap) << "\n";
        out << "  task_complexity_from_gap " << fmt(task) << "\n";
        ordered_json j;
        j["name"] = p.name;
        j["lambda"] = lambda;
        j["reported_lambda"] = p.reported_lambda;
        j["lambda_discrepancy"] = flag;
        j["reported_task_complexity"] = p.reported_task;
        j["reported_n_pts"] = p.reported_n_pts;
        j["implied_std_gap"] = gap;
        j["task_complexity_from_gap"] = task;
        doc.push_back(j);
    }
    if (!o.out.empty()) {
        write_text(resolve_out(o.out, "complexity") / "complexity.json", doc.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_complexity(const Options& o, std::ostream& out) {
    if (o.published) {
        return cmd_published(o, out);
    }
    if (o.scene.empty()) {
        throw ValidationError("complexity needs --scene or --published");
    }
    SceneFile file = load_scene(o.scene);
    if (o.hit_mode == "all") {
        file.synth.hit_mode = HitMode::all_hits;
    } else if (o.hit_mode == "earliest") {
        file.synth.hit_mode = HitMode::earliest_hit;
    }
    Partition partition;
    if (o.fraction) {
        partition = RayFractionPartition{*o.fraction};
    } else if (file.partition) {
        partition = *file.partition;
    } else {
        throw ValidationError("scene has no partition; pass --fraction");
    }
    const ExplicitField field = generate_field(file.scene, file.cameras, file.synth);
    const FieldSplit split = split_train_novel(field, partition, o.seed);
    const ComplexityReport r = complexity_report(file.shaders, file.scene.lights.size(), split.train, split.novel,
                                                 parse_basis(o.basis), file.reported_lambda);
    print_report(out, r);
    if (!o.out.empty()) {
        ordered_json j;
        j["lambda"] = r.lambda;
        j["terms"] = ordered_json::object();
        for (const auto& t : r.terms) {
            j["terms"][t.name] = t.value;
        }
        j["reported_lambda"] = r.reported_lambda ? ordered_json(*r.reported_lambda) : ordered_json(nullptr);
        j["lambda_discrepancy"] = r.lambda_discrepancy;
        j["n_pts"] = r.n_pts;
        j["basis"] = o.basis;
        j["std_train"] = r.std_train;
        j["std_novel"] = r.std_novel;
        j["task_complexity"] = r.task;
        write_text(resolve_out(o.out, "complexity") / "complexity.json", j.dump(2) + "\n");
    }
    return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    const std::vector<std::string> wanted = split_list(o.metrics);
    for (const auto& m : wanted) {
        if (m != "wape" && m != "psnr" && m != "ssim" && m != "depth_psnr") {
            throw ValidationError("unknown metric '" + m + "'");
        }
    }
    const auto want = [&](const char* m) { return std::find(wanted.begin(), wanted.end(), m) != wanted.end(); };

    const Dataset ds = import_dataset(o.dataset);
    const std::vector<PredictionSet> preds = import_predictions(o.predictions, ds);
    std::vector<MetricReport> reports;
    if (want("wape")) {
        for (const auto& p : preds) {
            reports.push_back(wape(p, ds.field));
        }
    }
    if (want("depth_psnr")) {
        for (const auto& p : preds) {
            if (p.parameter == Parameter::depth) {
                reports.push_back(depth_psnr(p, ds.field, ds.meta.t_max));
            }
        }
    }
    if (want("psnr") || want("ssim")) {
        const OpacityRule rule = parse_rule(o.mode);
        const ExplicitField predicted = apply_predictions(ds.field, preds);
        std::vector<std::uint32_t> ids;
        std::vector<double> p_values, s_values;
        for (const auto& v : ds.field.views) {
            const Image truth = render_view(ds.field, v.view_id, rule);
            const Image guess = render_view(predicted, v.view_id, rule);
            ids.push_back(v.view_id);
            if (want("psnr")) {
                p_values.push_back(psnr(truth, guess));
            }
            if (want("ssim")) {
                s_values.push_back(ssim(truth, guess));
            }
        }
        if (want("psnr")) {
            reports.push_back(make_report("psnr", ids, p_values));
        }
        if (want("ssim")) {
            reports.push_back(make_report("ssim", ids, s_values));
        }
    }

    // PSNR of identical renders is infinite; tables show the cap instead.
    const auto shown = [](const MetricReport& r, double v) {
        return (r.name.ends_with("psnr") && std::isinf(v) && v > 0) ? kPsnrCap : v;
    };
    std::ostringstream csv;
    csv << "metric,view,value\n";
    out << "metric mean std views\n";
    for (const auto& r : reports) {
        out << r.name << " " << fmt(shown(r, r.mean)) << " " << fmt(r.stddev) << " " << r.per_view.size() << "\n";
        for (std::size_t i = 0; i < r.per_view.size(); ++i) {
            csv << r.name << "," << r.view_ids[i] << "," << fmt(shown(r, r.per_view[i])) << "\n";
        }
        csv << r.name << ",mean," << fmt(shown(r, r.mean)) << "\n";
        csv << r.name << ",std," << fmt(r.stddev) << "\n";
    }
    write_text(resolve_out(o.out, "evaluate") / "metrics.csv", csv.str());
    return kExitOk;
}

int cmd_render(const Options& o, std::ostream& out) {
    const Dataset ds = import_dataset(o.dataset);
    if (ds.field.find_view(o.view) == nullptr) {
        throw ValidationError("dataset has no view " + std::to_string(o.view));
    }
    const fs::path dir = resolve_out(o.out, "render");
    write_view(render_view(ds.field, o.view, parse_rule(o.mode)), dir, o.view);
    if (!o.quiet) {
        out << "wrote " << (dir / (view_stem(o.view) + ".png")).string() << "\n";
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ground-truth radiance field synthesis and evaluation", "nerfgt"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> modes{"standard", "modified"};
    const std::vector<std::string> hit_modes{"all", "earliest"};

    auto* synth = app.add_subcommand("synthesize", "Build, shade and export a dataset with ground-truth renders");
    synth->add_option("--scene", o.scene, "Scene JSON file")->required();
    synth->add_option("--out", o.out, "Output directory (default: $NERFGT_OUTPUT_ROOT/<scene>)");
    synth->add_option("--seed", o.seed, "Run seed")->capture_default_str();
    synth->add_option("--mode", o.mode, "Opacity rule for renders")->check(CLI::IsMember(modes))->capture_default_str();
    synth->add_option("--hit-mode", o.hit_mode, "Override the scene's hit mode")->check(CLI::IsMember(hit_modes));
    synth->add_flag("-q,--quiet", o.quiet, "Suppress the summary");

    auto* cx = app.add_subcommand("complexity", "Report shader and task complexity");
    cx->add_option("--scene", o.scene, "Scene JSON file");
    cx->add_option("--out", o.out, "Directory for complexity.json");
    cx->add_option("--seed", o.seed, "Split seed")->capture_default_str();
    cx->add_option("--basis", o.basis, "Positions used for the spread")
        ->check(CLI::IsMember({"origins", "samples"}))
        ->capture_default_str();
    cx->add_option("--hit-mode", o.hit_mode, "Override the scene's hit mode")->check(CLI::IsMember(hit_modes));
    cx->add_option("--fraction", o.fraction, "Per-view training ray fraction, overriding the scene partition");
    cx->add_flag("--published", o.published, "Evaluate the built-in published shader presets");

    auto* ev = app.add_subcommand("evaluate", "Score predictions against a dataset");
    ev->add_option("--dataset", o.dataset, "Dataset directory")->required();
    ev->add_option("--predictions", o.predictions, "Prediction dump directory")->required();
    ev->add_option("--metrics", o.metrics, "Comma list of wape, psnr, ssim, depth_psnr")->capture_default_str();
    ev->add_option("--mode", o.mode, "Opacity rule for renders")->check(CLI::IsMember(modes))->capture_default_str();
    ev->add_option("--out", o.out, "Directory for metrics.csv");

    auto* rd = app.add_subcommand("render", "Re-render one view of a dataset");
    rd->add_option("--dataset", o.dataset, "Dataset directory")->required();
    rd->add_option("--view", o.view, "View id")->capture_default_str();
    rd->add_option("--mode", o.mode, "Opacity rule")->check(CLI::IsMember(modes))->capture_default_str();
    rd->add_option("--out", o.out, "Output directory");
    rd->add_flag("-q,--quiet", o.quiet, "Suppress the summary");

    // CLI11 consumes arguments from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (synth->parsed()) {
            return cmd_synthesize(o, out, err);
        }
        if (cx->parsed()) {
            return cmd_complexity(o, out);
        }
        if (ev->parsed()) {
            return cmd_evaluate(o, out);
        }
        return cmd_render(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace nerfgt::cli
