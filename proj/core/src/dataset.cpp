// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/dataset.hpp"

#include <deque>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "binary_io.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/hash.hpp"

namespace nerfgt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Column {
    std::string name;
    std::string dtype; // "float32" or "uint32"
    std::size_t rows = 0;
    std::size_t cols = 1;
    detail::Bytes bytes;
};

class ColumnWriter {
public:
    explicit ColumnWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    Column& add(std::string name, std::string dtype, std::size_t rows, std::size_t cols) {
        columns_.push_back({std::move(name), std::move(dtype), rows, cols, {}});
        columns_.back().bytes.reserve(rows * cols * 4);
        return columns_.back();
    }

    ordered_json write_all() const {
        ordered_json arrays = ordered_json::array();
        for (const Column& c : columns_) {
            const std::string file = c.name + ".bin";
            detail::write_file(dir_ / file, c.bytes);
            ordered_json j;
            j["name"] = c.name;
            j["file"] = file;
            j["dtype"] = c.dtype;
            j["shape"] = c.cols == 1 ? ordered_json::array({c.rows}) : ordered_json::array({c.rows, c.cols});
            j["bytes"] = c.bytes.size();
            j["sha256"] = sha256_hex(c.bytes);
            arrays.push_back(j);
        }
        return arrays;
    }

private:
    std::filesystem::path dir_;
    std::deque<Column> columns_; // stable references across add()
};

struct LoadedColumn {
    std::size_t rows = 0;
    std::size_t cols = 1;
    std::string dtype;
    detail::Bytes bytes;
};

class ColumnReader {
public:
    ColumnReader(std::filesystem::path dir, const json& arrays, std::string label)
        : dir_(std::move(dir)), label_(std::move(label)) {
        if (!arrays.is_array()) {
            throw ValidationError(label_ + ": manifest 'arrays' must be a list");
        }
        for (const auto& a : arrays) {
            entries_[a.at("name").get<std::string>()] = a;
        }
    }

    bool has(const std::string& name) const { return entries_.contains(name); }

    LoadedColumn load(const std::string& name, const std::string& dtype, std::size_t rows, std::size_t cols) const {
        const auto it = entries_.find(name);
        if (it == entries_.end()) {
            throw ValidationError(label_ + ": array '" + name + "' missing from manifest");
        }
        const json& entry = it->second;
        LoadedColumn col;
        col.dtype = entry.at("dtype").get<std::string>();
        const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
        col.rows = shape.empty() ? 0 : shape[0];
        col.cols = shape.size() > 1 ? shape[1] : 1;
        col.bytes = detail::read_file(dir_ / entry.at("file").get<std::string>());
        if (sha256_hex(col.bytes) != entry.at("sha256").get<std::string>()) {
            throw IntegrityError(label_ + ": array '" + name + "' hash mismatch (corrupt or truncated file)");
        }
        if (col.dtype != dtype || col.rows != rows || col.cols != cols || col.bytes.size() != rows * cols * 4) {
            throw ValidationError(label_ + ": array '" + name + "' shape or dtype inconsistent with manifest");
        }
        return col;
    }

private:
    std::filesystem::path dir_;
    std::string label_;
    std::map<std::string, json> entries_;
};

Vec3 get_vec3(const LoadedColumn& c, std::size_t row) {
    return {detail::get_f32(c.bytes, 3 * row), detail::get_f32(c.bytes, 3 * row + 1),
            detail::get_f32(c.bytes, 3 * row + 2)};
}

void put_vec3(Column& c, const Vec3& v) {
    detail::put_f32(c.bytes, v.x);
    detail::put_f32(c.bytes, v.y);
    detail::put_f32(c.bytes, v.z);
}

json read_manifest(const std::filesystem::path& dir, const std::string& expected_format) {
    json manifest;
    try {
        manifest = json::parse(detail::read_text(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw ValidationError(expected_format + ": malformed manifest: " + e.what());
    }
    if (manifest.value("format", "") != expected_format) {
        throw ValidationError(dir.string() + ": not a " + expected_format + " bundle");
    }
    if (manifest.value("version", 0) != kDatasetFormatVersion) {
        throw ValidationError(dir.string() + ": unsupported " + expected_format + " version");
    }
    return manifest;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    }
}

} // namespace

void export_dataset(const ExplicitField& field, const DatasetMeta& meta, const std::filesystem::path& dir) {
    ensure_dir(dir);
    const std::size_t nv = field.views.size();
    const std::size_t nr = field.rays.size();
    const std::size_t ns = field.samples.size();
    ColumnWriter w(dir);
    {
        auto& id = w.add("view_id", "uint32", nv, 1);
        auto& size = w.add("view_size", "uint32", nv, 2);
        auto& origin = w.add("view_origin", "float32", nv, 3);
        for (const auto& v : field.views) {
            detail::put_u32(id.bytes, v.view_id);
            detail::put_u32(size.bytes, v.width);
            detail::put_u32(size.bytes, v.height);
            put_vec3(origin, v.origin);
        }
    }
    {
        auto& view = w.add("ray_view", "uint32", nr, 1);
        auto& pixel = w.add("ray_pixel", "uint32", nr, 2);
        auto& origin = w.add("ray_origin", "float32", nr, 3);
        auto& dir_col = w.add("ray_direction", "float32", nr, 3);
        auto& first = w.add("ray_first_sample", "uint32", nr, 1);
        auto& count = w.add("ray_sample_count", "uint32", nr, 1);
        for (const auto& r : field.rays) {
            detail::put_u32(view.bytes, r.view_id);
            detail::put_u32(pixel.bytes, r.row);
            detail::put_u32(pixel.bytes, r.col);
            put_vec3(origin, r.origin);
            put_vec3(dir_col, r.direction);
            detail::put_u32(first.bytes, r.first_sample);
            detail::put_u32(count.bytes, r.sample_count);
        }
    }
    {
        auto& view = w.add("sample_view", "uint32", ns, 1);
        auto& ray = w.add("sample_ray", "uint32", ns, 1);
        auto& surface = w.add("sample_surface", "uint32", ns, 1);
        auto& t = w.add("sample_t", "float32", ns, 1);
        auto& delta = w.add("sample_delta", "float32", ns, 1);
        auto& position = w.add("sample_position", "float32", ns, 3);
        auto& colour = w.add("sample_colour", "float32", ns, 3);
        auto& density = w.add("sample_density", "float32", ns, 1);
        auto& empty = w.add("sample_is_empty", "uint32", ns, 1);
        auto& grazing = w.add("sample_grazing", "uint32", ns, 1);
        for (const auto& s : field.samples) {
            detail::put_u32(view.bytes, s.view_id);
            detail::put_u32(ray.bytes, s.ray_id);
            detail::put_u32(surface.bytes, s.surface_id);
            detail::put_f32(t.bytes, s.t);
            detail::put_f32(delta.bytes, s.delta_prime);
            put_vec3(position, s.position);
            for (double c : s.colour) {
                detail::put_f32(colour.bytes, c);
            }
            detail::put_f32(density.bytes, s.density);
            detail::put_u32(empty.bytes, s.is_empty_space ? 1 : 0);
            detail::put_u32(grazing.bytes, s.grazing ? 1 : 0);
        }
    }
    if (!meta.train_rays.empty() || !meta.novel_rays.empty()) {
        auto& train = w.add("split_train_rays", "uint32", meta.train_rays.size(), 1);
        for (auto r : meta.train_rays) {
            detail::put_u32(train.bytes, r);
        }
        auto& novel = w.add("split_novel_rays", "uint32", meta.novel_rays.size(), 1);
        for (auto r : meta.novel_rays) {
            detail::put_u32(novel.bytes, r);
        }
    }

    ordered_json m;
    m["format"] = "nerfgt-dataset";
    m["version"] = kDatasetFormatVersion;
    m["scene_hash"] = meta.scene_hash;
    m["seed"] = meta.seed;
    m["t_max"] = meta.t_max;
    m["n_views"] = nv;
    m["n_rays"] = nr;
    m["n_pts"] = ns;
    m["surface_count"] = field.surface_count;
    m["endianness"] = "little";
    m["no_surface_id"] = kNoSurface;
    ordered_json conv;
    conv["handedness"] = "right";
    conv["camera_forward"] = "-z";
    conv["camera_up"] = "+y";
    conv["pose"] = "world_from_camera, row-major 4x4";
    conv["pixel_rays"] = "through pixel centres, row 0 at the top";
    m["camera_convention"] = conv;
    m["cameras"] = ordered_json::array();
    for (const auto& c : meta.cameras) {
        ordered_json j;
        j["pose"] = c.pose;
        j["fov_y_deg"] = c.fov_y_deg;
        j["width"] = c.width;
        j["height"] = c.height;
        m["cameras"].push_back(j);
    }
    m["arrays"] = w.write_all();
    detail::write_text(dir / "manifest.json", m.dump(2) + "\n");
}

namespace {

Dataset import_dataset_unchecked(const std::filesystem::path& dir) {
    const json m = read_manifest(dir, "nerfgt-dataset");
    Dataset ds;
    try {
        ds.meta.scene_hash = m.at("scene_hash").get<std::string>();
        ds.meta.seed = m.at("seed").get<std::uint64_t>();
        ds.meta.t_max = m.at("t_max").get<double>();
        for (const auto& c : m.at("cameras")) {
            Camera cam;
            cam.pose = c.at("pose").get<Mat4>();
            cam.fov_y_deg = c.at("fov_y_deg").get<double>();
            cam.width = c.at("width").get<std::uint32_t>();
            cam.height = c.at("height").get<std::uint32_t>();
            ds.meta.cameras.push_back(cam);
        }
    } catch (const json::exception& e) {
        throw ValidationError("dataset manifest: " + std::string(e.what()));
    }
    const auto nv = m.at("n_views").get<std::size_t>();
    const auto nr = m.at("n_rays").get<std::size_t>();
    const auto ns = m.at("n_pts").get<std::size_t>();
    ColumnReader r(dir, m.at("arrays"), "dataset");

    ExplicitField& f = ds.field;
    f.surface_count = m.at("surface_count").get<std::uint32_t>();
    {
        const auto id = r.load("view_id", "uint32", nv, 1);
        const auto size = r.load("view_size", "uint32", nv, 2);
        const auto origin = r.load("view_origin", "float32", nv, 3);
        f.views.resize(nv);
        for (std::size_t i = 0; i < nv; ++i) {
            f.views[i] = {detail::get_u32(id.bytes, i), detail::get_u32(size.bytes, 2 * i),
                          detail::get_u32(size.bytes, 2 * i + 1), get_vec3(origin, i)};
        }
    }
    {
        const auto view = r.load("ray_view", "uint32", nr, 1);
        const auto pixel = r.load("ray_pixel", "uint32", nr, 2);
        const auto origin = r.load("ray_origin", "float32", nr, 3);
        const auto direction = r.load("ray_direction", "float32", nr, 3);
        const auto first = r.load("ray_first_sample", "uint32", nr, 1);
        const auto count = r.load("ray_sample_count", "uint32", nr, 1);
        f.rays.resize(nr);
        for (std::size_t i = 0; i < nr; ++i) {
            RayRecord& rec = f.rays[i];
            rec.view_id = detail::get_u32(view.bytes, i);
            rec.row = detail::get_u32(pixel.bytes, 2 * i);
            rec.col = detail::get_u32(pixel.bytes, 2 * i + 1);
            rec.origin = get_vec3(origin, i);
            rec.direction = get_vec3(direction, i);
            rec.first_sample = detail::get_u32(first.bytes, i);
            rec.sample_count = detail::get_u32(count.bytes, i);
        }
    }
    {
        const auto view = r.load("sample_view", "uint32", ns, 1);
        const auto ray = r.load("sample_ray", "uint32", ns, 1);
        const auto surface = r.load("sample_surface", "uint32", ns, 1);
        const auto t = r.load("sample_t", "float32", ns, 1);
        const auto delta = r.load("sample_delta", "float32", ns, 1);
        const auto position = r.load("sample_position", "float32", ns, 3);
        const auto colour = r.load("sample_colour", "float32", ns, 3);
        const auto density = r.load("sample_density", "float32", ns, 1);
        const auto empty = r.load("sample_is_empty", "uint32", ns, 1);
        const auto grazing = r.load("sample_grazing", "uint32", ns, 1);
        f.samples.resize(ns);
        for (std::size_t i = 0; i < ns; ++i) {
            RaySample& s = f.samples[i];
            s.view_id = detail::get_u32(view.bytes, i);
            s.ray_id = detail::get_u32(ray.bytes, i);
            if (s.ray_id >= nr) {
                throw ValidationError("dataset: sample " + std::to_string(i) + " references a missing ray");
            }
            s.surface_id = detail::get_u32(surface.bytes, i);
            s.t = detail::get_f32(t.bytes, i);
            s.delta_prime = detail::get_f32(delta.bytes, i);
            s.position = get_vec3(position, i);
            s.direction = f.rays[s.ray_id].direction;
            s.colour = {detail::get_f32(colour.bytes, 3 * i), detail::get_f32(colour.bytes, 3 * i + 1),
                        detail::get_f32(colour.bytes, 3 * i + 2)};
            s.density = detail::get_f32(density.bytes, i);
            s.is_empty_space = detail::get_u32(empty.bytes, i) != 0;
            s.grazing = detail::get_u32(grazing.bytes, i) != 0;
        }
    }
    if (r.has("split_train_rays")) {
        const auto& arrays = m.at("arrays");
        const auto rows_of = [&](const std::string& name) {
            for (const auto& a : arrays) {
                if (a.at("name") == name) {
                    return a.at("shape").at(0).get<std::size_t>();
                }
            }
            return std::size_t{0};
        };
        const auto train = r.load("split_train_rays", "uint32", rows_of("split_train_rays"), 1);
        const auto novel = r.load("split_novel_rays", "uint32", rows_of("split_novel_rays"), 1);
        for (std::size_t i = 0; i < train.rows; ++i) {
            ds.meta.train_rays.push_back(detail::get_u32(train.bytes, i));
        }
        for (std::size_t i = 0; i < novel.rows; ++i) {
            ds.meta.novel_rays.push_back(detail::get_u32(novel.bytes, i));
        }
    }
    validate_field(f);
    return ds;
}

} // namespace

Dataset import_dataset(const std::filesystem::path& dir) {
    try {
        return import_dataset_unchecked(dir);
    } catch (const json::exception& e) {
        throw ValidationError("dataset manifest: " + std::string(e.what()));
    }
}

void export_predictions(const std::filesystem::path& dir, const std::string& scene_hash, std::size_t n_pts,
                        std::span<const std::uint32_t> ids, std::span<const PredictionSet> sets) {
    ensure_dir(dir);
    ColumnWriter w(dir);
    auto& id_col = w.add("sample_id", "uint32", ids.size(), 1);
    for (auto id : ids) {
        detail::put_u32(id_col.bytes, id);
    }
    ordered_json params = ordered_json::array();
    for (const auto& set : sets) {
        const auto ch = static_cast<std::size_t>(parameter_channels(set.parameter));
        if (set.values.size() != ids.size() * ch) {
            throw ValidationError("export_predictions: '" + std::string(parameter_name(set.parameter)) +
                                  "' has the wrong number of values");
        }
        auto& col = w.add(std::string(parameter_name(set.parameter)), "float32", ids.size(), ch);
        for (double v : set.values) {
            detail::put_f32(col.bytes, v);
        }
        params.push_back(parameter_name(set.parameter));
    }
    ordered_json m;
    m["format"] = "nerfgt-predictions";
    m["version"] = kDatasetFormatVersion;
    m["scene_hash"] = scene_hash;
    m["n_pts"] = n_pts;
    m["rows"] = ids.size();
    m["parameters"] = params;
    m["endianness"] = "little";
    m["arrays"] = w.write_all();
    detail::write_text(dir / "manifest.json", m.dump(2) + "\n");
}

namespace {

std::vector<PredictionSet> import_predictions_unchecked(const std::filesystem::path& dir, const Dataset& dataset) {
    const json m = read_manifest(dir, "nerfgt-predictions");
    const auto hash = m.at("scene_hash").get<std::string>();
    if (hash != dataset.meta.scene_hash) {
        throw ValidationError("predictions reference scene " + hash + " but the dataset is " +
                              dataset.meta.scene_hash);
    }
    const std::size_t n = dataset.field.n_pts();
    if (m.at("n_pts").get<std::size_t>() != n || m.at("rows").get<std::size_t>() != n) {
        throw ValidationError("predictions cover " + std::to_string(m.at("rows").get<std::size_t>()) +
                              " samples; dataset has " + std::to_string(n));
    }
    ColumnReader r(dir, m.at("arrays"), "predictions");
    const auto ids = r.load("sample_id", "uint32", n, 1);
    std::vector<std::size_t> row_of(n, n);
    for (std::size_t row = 0; row < n; ++row) {
        const std::uint32_t id = detail::get_u32(ids.bytes, row);
        if (id >= n) {
            throw ValidationError("predictions row " + std::to_string(row) + ": sample id " + std::to_string(id) +
                                  " out of range");
        }
        if (row_of[id] != n) {
            throw ValidationError("predictions row " + std::to_string(row) + ": duplicate sample id " +
                                  std::to_string(id));
        }
        row_of[id] = row;
    }
    std::vector<PredictionSet> out;
    for (const auto& name : m.at("parameters")) {
        PredictionSet set;
        set.parameter = parse_parameter(name.get<std::string>());
        const auto ch = static_cast<std::size_t>(parameter_channels(set.parameter));
        const auto col = r.load(name.get<std::string>(), "float32", n, ch);
        set.values.resize(n * ch);
        for (std::size_t id = 0; id < n; ++id) {
            for (std::size_t c = 0; c < ch; ++c) {
                set.values[id * ch + c] = detail::get_f32(col.bytes, row_of[id] * ch + c);
            }
        }
        out.push_back(std::move(set));
    }
    return out;
}

} // namespace

std::vector<PredictionSet> import_predictions(const std::filesystem::path& dir, const Dataset& dataset) {
    try {
        return import_predictions_unchecked(dir, dataset);
    } catch (const json::exception& e) {
        throw ValidationError("predictions manifest: " + std::string(e.what()));
    }
}

} // namespace nerfgt
