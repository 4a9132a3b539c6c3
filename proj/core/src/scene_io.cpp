// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/scene_io.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

#include "binary_io.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/hash.hpp"
#include "nerfgt/shading.hpp"

namespace nerfgt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw ValidationError("scene: " + path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) {
        schema_error(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        schema_error(path + "." + key, "missing required field");
    }
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        schema_error(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        schema_error(path, "must be finite");
    }
    return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, path + "." + key);
}

std::uint32_t as_count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > 0xffffffffLL) {
        schema_error(path, "expected a non-negative integer");
    }
    return j.get<std::uint32_t>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
        schema_error(path, "expected a boolean");
    }
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        schema_error(path, "expected a string");
    }
    return j.get<std::string>();
}

template <std::size_t N>
std::array<double, N> as_array(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != N) {
        schema_error(path, "expected an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = as_number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return out;
}

Vec3 as_vec3(const json& j, const std::string& path) {
    const auto a = as_array<3>(j, path);
    return {a[0], a[1], a[2]};
}

const json& as_list(const json& j, const std::string& path) {
    if (!j.is_array()) {
        schema_error(path, "expected an array");
    }
    return j;
}

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Material parse_material(const json& j, const std::string& path) {
    Material m;
    m.name = as_string(require(j, "name", path), path + ".name");
    m.albedo = as_array<3>(require(j, "albedo", path), path + ".albedo");
    m.glass = j.contains("glass") ? as_bool(j["glass"], path + ".glass") : false;
    m.density = number_or(j, "density", m.glass ? 0.5 : 1.0, path);
    m.reflectance = number_or(j, "reflectance", 0.0, path);
    return m;
}

LightSource parse_light(const json& j, const std::string& path) {
    LightSource l;
    l.name = j.contains("name") ? as_string(j["name"], path + ".name") : "";
    l.position = as_vec3(require(j, "position", path), path + ".position");
    l.intensity = number_or(j, "intensity", 1.0, path);
    l.radius = number_or(j, "radius", 0.0, path);
    return l;
}

ShaderSpec parse_shader(const json& j, const std::string& path) {
    ShaderSpec s;
    s.name = j.contains("name") ? as_string(j["name"], path + ".name") : "";
    const std::string kind = as_string(require(j, "kind", path), path + ".kind");
    if (kind == "diffuse") {
        s.kind = ShaderKind::diffuse;
    } else if (kind == "reflection") {
        s.kind = ShaderKind::reflection;
    } else {
        schema_error(path + ".kind", "must be 'diffuse' or 'reflection'");
    }
    s.rho = as_count(require(j, "rho", path), path + ".rho");
    s.ord = j.contains("ord") ? as_count(j["ord"], path + ".ord") : (s.kind == ShaderKind::diffuse ? 1u : 2u);
    s.omega = number_or(j, "omega", 256.0, path);
    const std::string target = j.contains("target") ? as_string(j["target"], path + ".target") : "all";
    if (target == "all") {
        s.target = ShaderTarget::all;
    } else if (target == "solid") {
        s.target = ShaderTarget::solid;
    } else if (target == "glass") {
        s.target = ShaderTarget::glass;
    } else {
        schema_error(path + ".target", "must be 'all', 'solid' or 'glass'");
    }
    return s;
}

SynthConfig parse_synth(const json& j, const std::string& path) {
    SynthConfig c;
    if (!j.is_object()) {
        schema_error(path, "expected an object");
    }
    c.t_max = number_or(j, "t_max", c.t_max, path);
    c.delta = number_or(j, "delta", c.delta, path);
    if (j.contains("hit_mode")) {
        const std::string m = as_string(j["hit_mode"], path + ".hit_mode");
        if (m == "all") {
            c.hit_mode = HitMode::all_hits;
        } else if (m == "earliest") {
            c.hit_mode = HitMode::earliest_hit;
        } else {
            schema_error(path + ".hit_mode", "must be 'all' or 'earliest'");
        }
    }
    if (j.contains("empty_space")) {
        const std::string m = as_string(j["empty_space"], path + ".empty_space");
        if (m == "far-bound-sample") {
            c.empty_space = EmptySpace::far_bound_sample;
        } else if (m == "omit") {
            c.empty_space = EmptySpace::omit;
        } else {
            schema_error(path + ".empty_space", "must be 'far-bound-sample' or 'omit'");
        }
    }
    if (j.contains("background")) {
        c.background = as_array<3>(j["background"], path + ".background");
    }
    return c;
}

Mat4 parse_transform(const json& j, const std::string& path) {
    if (j.contains("transform")) {
        return as_array<16>(j["transform"], path + ".transform");
    }
    const Vec3 scale = j.contains("scale") ? as_vec3(j["scale"], path + ".scale") : Vec3{1.0, 1.0, 1.0};
    const Vec3 translate = j.contains("translate") ? as_vec3(j["translate"], path + ".translate") : Vec3{};
    return scale_translate(scale, translate);
}

Camera parse_camera(const json& j, const std::string& path) {
    Camera c;
    if (j.contains("pose")) {
        c.pose = as_array<16>(j["pose"], path + ".pose");
    } else if (j.contains("eye")) {
        const Vec3 eye = as_vec3(j["eye"], path + ".eye");
        const Vec3 target = as_vec3(require(j, "target", path), path + ".target");
        const Vec3 up = j.contains("up") ? as_vec3(j["up"], path + ".up") : Vec3{0.0, 1.0, 0.0};
        try {
            c.pose = look_at(eye, target, up);
        } catch (const ValidationError& e) {
            schema_error(path, e.what());
        }
    } else {
        schema_error(path + ".pose", "missing required field (or eye/target)");
    }
    c.fov_y_deg = as_number(require(j, "fov_y_deg", path), path + ".fov_y_deg");
    c.width = as_count(require(j, "width", path), path + ".width");
    c.height = as_count(require(j, "height", path), path + ".height");
    return c;
}

Partition parse_partition(const json& j, const std::string& path) {
    const std::string mode = as_string(require(j, "mode", path), path + ".mode");
    if (mode == "views") {
        ViewPartition p;
        const json& train = as_list(require(j, "train", path), path + ".train");
        for (std::size_t i = 0; i < train.size(); ++i) {
            p.train.push_back(as_count(train[i], indexed(path + ".train", i)));
        }
        const json& novel = as_list(require(j, "novel", path), path + ".novel");
        for (std::size_t i = 0; i < novel.size(); ++i) {
            p.novel.push_back(as_count(novel[i], indexed(path + ".novel", i)));
        }
        return p;
    }
    if (mode == "fraction") {
        return RayFractionPartition{as_number(require(j, "fraction", path), path + ".fraction")};
    }
    schema_error(path + ".mode", "must be 'views' or 'fraction'");
}

void append_surfaces(std::vector<Surface>& out, std::vector<Surface> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

void parse_mesh(const json& j, const std::string& path, const std::map<std::string, std::uint32_t>& materials,
                const std::filesystem::path& base_dir, std::vector<Surface>& out) {
    const std::string type = as_string(require(j, "type", path), path + ".type");
    const std::string mat_name = as_string(require(j, "material", path), path + ".material");
    const auto mat = materials.find(mat_name);
    if (mat == materials.end()) {
        schema_error(path + ".material", "unknown material '" + mat_name + "'");
    }
    const std::uint32_t mid = mat->second;
    try {
        if (type == "triangle") {
            out.emplace_back(make_triangle(as_vec3(require(j, "a", path), path + ".a"),
                                           as_vec3(require(j, "b", path), path + ".b"),
                                           as_vec3(require(j, "c", path), path + ".c"), mid));
        } else if (type == "rect") {
            out.emplace_back(make_rect(as_vec3(require(j, "corner", path), path + ".corner"),
                                       as_vec3(require(j, "edge_u", path), path + ".edge_u"),
                                       as_vec3(require(j, "edge_v", path), path + ".edge_v"), mid));
        } else if (type == "obj") {
            const auto file = base_dir / as_string(require(j, "path", path), path + ".path");
            for (const auto& tri : import_obj(file, mid)) {
                out.emplace_back(tri);
            }
        } else if (type == "box" || type == "sphere" || type == "plane") {
            PrimitiveOptions opts;
            opts.rects = j.contains("rects") ? as_bool(j["rects"], path + ".rects") : false;
            if (j.contains("segments")) {
                opts.segments = as_count(j["segments"], path + ".segments");
            }
            if (j.contains("rings")) {
                opts.rings = as_count(j["rings"], path + ".rings");
            }
            const PrimitiveKind kind = type == "box"      ? PrimitiveKind::box
                                       : type == "sphere" ? PrimitiveKind::uv_sphere
                                                          : PrimitiveKind::plane;
            append_surfaces(out, build_primitive(kind, parse_transform(j, path), mid, opts));
        } else {
            schema_error(path + ".type", "unknown mesh type '" + type + "'");
        }
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        if (what.rfind("scene: ", 0) == 0) {
            throw;
        }
        schema_error(path, what);
    } catch (const NumericError& e) {
        schema_error(path, e.what());
    }
}

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

template <std::size_t N>
ordered_json arr_json(const std::array<double, N>& a) {
    ordered_json j = ordered_json::array();
    for (double v : a) {
        j.push_back(v);
    }
    return j;
}

const char* target_name(ShaderTarget t) {
    switch (t) {
    case ShaderTarget::solid:
        return "solid";
    case ShaderTarget::glass:
        return "glass";
    case ShaderTarget::all:
        break;
    }
    return "all";
}

} // namespace

void validate_scene(const SceneFile& file) {
    const Scene& scene = file.scene;
    if (file.version != kSceneSchemaVersion) {
        schema_error("version", "unsupported schema version " + std::to_string(file.version));
    }
    std::map<std::string, int> names;
    for (std::size_t i = 0; i < scene.materials.size(); ++i) {
        const Material& m = scene.materials[i];
        const std::string path = indexed("materials", i);
        if (!names.emplace(m.name, 0).second) {
            schema_error(path + ".name", "duplicate material name '" + m.name + "'");
        }
        for (int ch = 0; ch < 3; ++ch) {
            if (!(m.albedo[ch] >= 0.0 && m.albedo[ch] <= 1.0)) {
                schema_error(path + ".albedo", "channels must lie in [0, 1]");
            }
        }
        if (!(m.density > 0.0 && m.density <= 1.0)) {
            schema_error(path + ".density", "must lie in (0, 1]");
        }
        if (!m.glass && m.density != 1.0) {
            schema_error(path + ".density", "solid materials must have density 1");
        }
        if (m.glass && !(m.density < 1.0)) {
            schema_error(path + ".density", "glass materials must have density < 1");
        }
        if (!(m.reflectance >= 0.0 && m.reflectance <= 1.0)) {
            schema_error(path + ".reflectance", "must lie in [0, 1]");
        }
    }
    for (std::size_t i = 0; i < scene.lights.size(); ++i) {
        const LightSource& l = scene.lights[i];
        if (!(l.intensity > 0.0) || !std::isfinite(l.intensity)) {
            schema_error(indexed("lights", i) + ".intensity", "must be positive and finite");
        }
        if (!(l.radius >= 0.0)) {
            schema_error(indexed("lights", i) + ".radius", "must be non-negative");
        }
    }
    if (!(scene.glass_intensity_scale >= 0.0) || !std::isfinite(scene.glass_intensity_scale)) {
        schema_error("glass_intensity_scale", "must be non-negative and finite");
    }
    for (std::size_t i = 0; i < scene.surfaces.size(); ++i) {
        if (surface_material(scene.surfaces[i]) >= scene.materials.size()) {
            schema_error(indexed("meshes", i) + ".material", "does not resolve");
        }
    }
    for (std::size_t i = 0; i < file.shaders.size(); ++i) {
        try {
            validate_shader(file.shaders[i]);
        } catch (const ValidationError& e) {
            schema_error(indexed("shaders", i), e.what());
        }
    }
    if (!(file.synth.t_max > 0.0)) {
        schema_error("synth.t_max", "must be positive");
    }
    if (!(file.synth.delta > 0.0)) {
        schema_error("synth.delta", "must be positive");
    }
    for (std::size_t i = 0; i < file.cameras.size(); ++i) {
        const Camera& c = file.cameras[i];
        const std::string path = indexed("cameras", i);
        validate_rigid(c.pose, "scene: " + path + ".pose");
        if (c.width == 0 || c.height == 0) {
            schema_error(path, "resolution must be at least 1x1");
        }
        if (!(c.fov_y_deg > 0.0 && c.fov_y_deg < 180.0)) {
            schema_error(path + ".fov_y_deg", "must lie in (0, 180)");
        }
    }
    if (file.partition) {
        if (const auto* views = std::get_if<ViewPartition>(&*file.partition)) {
            for (auto v : views->train) {
                if (v >= file.cameras.size()) {
                    schema_error("partition.train", "view " + std::to_string(v) + " does not exist");
                }
            }
            for (auto v : views->novel) {
                if (v >= file.cameras.size()) {
                    schema_error("partition.novel", "view " + std::to_string(v) + " does not exist");
                }
            }
        } else {
            const double f = std::get<RayFractionPartition>(*file.partition).fraction;
            if (!(f > 0.0 && f < 1.0)) {
                schema_error("partition.fraction", "must lie in (0, 1)");
            }
        }
    }
}

SceneFile parse_scene(std::string_view json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scene: malformed JSON: ") + e.what());
    }
    SceneFile file;
    file.version = static_cast<int>(as_count(require(root, "version", "scene"), "version"));
    if (file.version != kSceneSchemaVersion) {
        schema_error("version", "unsupported schema version " + std::to_string(file.version));
    }

    std::map<std::string, std::uint32_t> material_ids;
    const json& materials = as_list(require(root, "materials", "scene"), "materials");
    for (std::size_t i = 0; i < materials.size(); ++i) {
        Material m = parse_material(materials[i], indexed("materials", i));
        if (!material_ids.emplace(m.name, static_cast<std::uint32_t>(i)).second) {
            schema_error(indexed("materials", i) + ".name", "duplicate material name '" + m.name + "'");
        }
        file.scene.materials.push_back(std::move(m));
    }
    if (root.contains("lights")) {
        const json& lights = as_list(root["lights"], "lights");
        for (std::size_t i = 0; i < lights.size(); ++i) {
            file.scene.lights.push_back(parse_light(lights[i], indexed("lights", i)));
        }
    }
    file.scene.glass_intensity_scale = number_or(root, "glass_intensity_scale", 0.5, "scene");
    if (root.contains("shaders")) {
        const json& shaders = as_list(root["shaders"], "shaders");
        for (std::size_t i = 0; i < shaders.size(); ++i) {
            file.shaders.push_back(parse_shader(shaders[i], indexed("shaders", i)));
        }
    }
    if (root.contains("synth")) {
        file.synth = parse_synth(root["synth"], "synth");
    }
    const json& meshes = as_list(require(root, "meshes", "scene"), "meshes");
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        parse_mesh(meshes[i], indexed("meshes", i), material_ids, base_dir, file.scene.surfaces);
    }
    const json& cameras = as_list(require(root, "cameras", "scene"), "cameras");
    for (std::size_t i = 0; i < cameras.size(); ++i) {
        file.cameras.push_back(parse_camera(cameras[i], indexed("cameras", i)));
    }
    if (root.contains("partition")) {
        file.partition = parse_partition(root["partition"], "partition");
    }
    if (root.contains("reported_lambda")) {
        file.reported_lambda = as_number(root["reported_lambda"], "reported_lambda");
    }
    validate_scene(file);
    return file;
}

SceneFile load_scene(const std::filesystem::path& path) {
    return parse_scene(detail::read_text(path), path.parent_path());
}

std::string dump_scene(const SceneFile& file) {
    const Scene& scene = file.scene;
    ordered_json root;
    root["version"] = file.version;
    root["materials"] = ordered_json::array();
    for (const auto& m : scene.materials) {
        ordered_json j;
        j["name"] = m.name;
        j["albedo"] = arr_json(m.albedo);
        j["density"] = m.density;
        j["glass"] = m.glass;
        j["reflectance"] = m.reflectance;
        root["materials"].push_back(j);
    }
    root["lights"] = ordered_json::array();
    for (const auto& l : scene.lights) {
        ordered_json j;
        j["name"] = l.name;
        j["position"] = vec_json(l.position);
        j["intensity"] = l.intensity;
        j["radius"] = l.radius;
        root["lights"].push_back(j);
    }
    root["glass_intensity_scale"] = scene.glass_intensity_scale;
    root["shaders"] = ordered_json::array();
    for (const auto& s : file.shaders) {
        ordered_json j;
        j["name"] = s.name;
        j["kind"] = s.kind == ShaderKind::diffuse ? "diffuse" : "reflection";
        j["rho"] = s.rho;
        j["ord"] = s.ord;
        j["omega"] = s.omega;
        j["target"] = target_name(s.target);
        root["shaders"].push_back(j);
    }
    ordered_json synth;
    synth["t_max"] = file.synth.t_max;
    synth["delta"] = file.synth.delta;
    synth["hit_mode"] = file.synth.hit_mode == HitMode::all_hits ? "all" : "earliest";
    synth["empty_space"] = file.synth.empty_space == EmptySpace::far_bound_sample ? "far-bound-sample" : "omit";
    synth["background"] = arr_json(file.synth.background);
    root["synth"] = synth;
    root["meshes"] = ordered_json::array();
    for (const auto& s : scene.surfaces) {
        ordered_json j;
        if (const auto* tri = std::get_if<TriangleSurface>(&s)) {
            j["type"] = "triangle";
            j["a"] = vec_json(tri->a);
            j["b"] = vec_json(tri->b);
            j["c"] = vec_json(tri->c);
        } else {
            const auto& rect = std::get<RectSurface>(s);
            j["type"] = "rect";
            j["corner"] = vec_json(rect.corner);
            j["edge_u"] = vec_json(rect.edge_u);
            j["edge_v"] = vec_json(rect.edge_v);
        }
        j["material"] = scene.materials.at(surface_material(s)).name;
        root["meshes"].push_back(j);
    }
    root["cameras"] = ordered_json::array();
    for (const auto& c : file.cameras) {
        ordered_json j;
        j["pose"] = arr_json(c.pose);
        j["fov_y_deg"] = c.fov_y_deg;
        j["width"] = c.width;
        j["height"] = c.height;
        root["cameras"].push_back(j);
    }
    if (file.partition) {
        ordered_json j;
        if (const auto* views = std::get_if<ViewPartition>(&*file.partition)) {
            j["mode"] = "views";
            j["train"] = views->train;
            j["novel"] = views->novel;
        } else {
            j["mode"] = "fraction";
            j["fraction"] = std::get<RayFractionPartition>(*file.partition).fraction;
        }
        root["partition"] = j;
    }
    if (file.reported_lambda) {
        root["reported_lambda"] = *file.reported_lambda;
    }
    return root.dump(2) + "\n";
}

void save_scene(const SceneFile& file, const std::filesystem::path& path) {
    detail::write_text(path, dump_scene(file));
}

std::string scene_hash(const SceneFile& file) {
    using namespace detail;
    const Scene& scene = file.scene;
    Bytes b;
    const auto vec = [&](const Vec3& v) {
        put_f64(b, v.x);
        put_f64(b, v.y);
        put_f64(b, v.z);
    };
    put_string(b, "nerfgt-scene");
    put_u32(b, static_cast<std::uint32_t>(file.version));
    put_u32(b, static_cast<std::uint32_t>(scene.materials.size()));
    for (const auto& m : scene.materials) {
        put_string(b, m.name);
        for (double c : m.albedo) {
            put_f64(b, c);
        }
        put_f64(b, m.density);
        put_u32(b, m.glass ? 1 : 0);
        put_f64(b, m.reflectance);
    }
    put_u32(b, static_cast<std::uint32_t>(scene.lights.size()));
    for (const auto& l : scene.lights) {
        put_string(b, l.name);
        vec(l.position);
        put_f64(b, l.intensity);
        put_f64(b, l.radius);
    }
    put_f64(b, scene.glass_intensity_scale);
    put_u32(b, static_cast<std::uint32_t>(scene.surfaces.size()));
    for (const auto& s : scene.surfaces) {
        if (const auto* tri = std::get_if<TriangleSurface>(&s)) {
            put_u32(b, 0);
            vec(tri->a);
            vec(tri->b);
            vec(tri->c);
        } else {
            const auto& rect = std::get<RectSurface>(s);
            put_u32(b, 1);
            vec(rect.corner);
            vec(rect.edge_u);
            vec(rect.edge_v);
        }
        put_u32(b, surface_material(s));
    }
    put_u32(b, static_cast<std::uint32_t>(file.shaders.size()));
    for (const auto& s : file.shaders) {
        put_string(b, s.name);
        put_u32(b, static_cast<std::uint32_t>(s.kind));
        put_u32(b, s.rho);
        put_u32(b, s.ord);
        put_f64(b, s.omega);
        put_u32(b, static_cast<std::uint32_t>(s.target));
    }
    put_f64(b, file.synth.t_max);
    put_f64(b, file.synth.delta);
    put_u32(b, static_cast<std::uint32_t>(file.synth.hit_mode));
    put_u32(b, static_cast<std::uint32_t>(file.synth.empty_space));
    for (double c : file.synth.background) {
        put_f64(b, c);
    }
    put_u32(b, static_cast<std::uint32_t>(file.cameras.size()));
    for (const auto& c : file.cameras) {
        for (double v : c.pose) {
            put_f64(b, v);
        }
        put_f64(b, c.fov_y_deg);
        put_u32(b, c.width);
        put_u32(b, c.height);
    }
    if (!file.partition) {
        put_u32(b, 0);
    } else if (const auto* views = std::get_if<ViewPartition>(&*file.partition)) {
        put_u32(b, 1);
        put_u32(b, static_cast<std::uint32_t>(views->train.size()));
        for (auto v : views->train) {
            put_u32(b, v);
        }
        put_u32(b, static_cast<std::uint32_t>(views->novel.size()));
        for (auto v : views->novel) {
            put_u32(b, v);
        }
    } else {
        put_u32(b, 2);
        put_f64(b, std::get<RayFractionPartition>(*file.partition).fraction);
    }
    return sha256_hex(b);
}

} // namespace nerfgt
