// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <numbers>

#include "binary_io.hpp"
#include "nerfgt/error.hpp"
#include "nerfgt/scene_io.hpp"

namespace nerfgt {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

[[noreturn]] void obj_error(const std::string& source, std::size_t line, const std::string& what) {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view token, const std::string& source, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
        obj_error(source, line, "invalid number '" + std::string(token) + "'");
    }
    return v;
}

long parse_index(std::string_view token, const std::string& source, std::size_t line) {
    // Only the position index matters in "v", "v/vt", "v//vn" and "v/vt/vn".
    const std::string_view head = token.substr(0, token.find('/'));
    long v = 0;
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), v);
    if (ec != std::errc() || ptr != head.data() + head.size() || v == 0) {
        obj_error(source, line, "invalid face index '" + std::string(token) + "'");
    }
    return v;
}

Vec3 transform_point(const Mat4& m, const Vec3& p) {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3],
            m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7],
            m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11]};
}

Vec3 transform_vector(const Mat4& m, const Vec3& v) {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[4] * v.x + m[5] * v.y + m[6] * v.z,
            m[8] * v.x + m[9] * v.y + m[10] * v.z};
}

double linear_determinant(const Mat4& m) {
    return m[0] * (m[5] * m[10] - m[6] * m[9]) - m[1] * (m[4] * m[10] - m[6] * m[8]) +
           m[2] * (m[4] * m[9] - m[5] * m[8]);
}

// Emits a convex polygon's quad or triangle, oriented away from `center`.
void emit_triangle(std::vector<Surface>& out, Vec3 a, Vec3 b, Vec3 c, const Vec3& center, std::uint32_t mid) {
    if (dot(cross(b - a, c - a), (a + b + c) / 3.0 - center) < 0.0) {
        std::swap(b, c);
    }
    out.emplace_back(make_triangle(a, b, c, mid));
}

void emit_quad(std::vector<Surface>& out, const std::array<Vec3, 4>& q, const Vec3& center, std::uint32_t mid,
               bool as_rect) {
    if (as_rect) {
        Vec3 eu = q[1] - q[0];
        Vec3 ev = q[3] - q[0];
        if (dot(cross(eu, ev), (q[0] + q[2]) / 2.0 - center) < 0.0) {
            std::swap(eu, ev);
        }
        out.emplace_back(make_rect(q[0], eu, ev, mid));
        return;
    }
    emit_triangle(out, q[0], q[1], q[2], center, mid);
    emit_triangle(out, q[0], q[2], q[3], center, mid);
}

} // namespace

std::vector<TriangleSurface> parse_obj(std::string_view text, std::uint32_t material_id,
                                       const std::string& source_name) {
    std::vector<Vec3> vertices;
    std::vector<std::array<long, 3>> faces;
    std::vector<std::size_t> face_lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0].front() == '#') {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (tokens[0] == "v") {
            if (tokens.size() < 4) {
                obj_error(source_name, line_no, "vertex needs three coordinates");
            }
            vertices.push_back({parse_double(tokens[1], source_name, line_no),
                                parse_double(tokens[2], source_name, line_no),
                                parse_double(tokens[3], source_name, line_no)});
        } else if (tokens[0] == "f") {
            if (tokens.size() != 4) {
                obj_error(source_name, line_no,
                          "only triangular faces are supported (face has " + std::to_string(tokens.size() - 1) +
                              " vertices)");
            }
            faces.push_back({parse_index(tokens[1], source_name, line_no), parse_index(tokens[2], source_name, line_no),
                             parse_index(tokens[3], source_name, line_no)});
            // Negative indices are relative to the vertices read so far.
            for (auto& idx : faces.back()) {
                if (idx < 0) {
                    idx = static_cast<long>(vertices.size()) + idx + 1;
                }
                if (idx < 1 || idx > static_cast<long>(vertices.size())) {
                    obj_error(source_name, line_no, "face index out of range");
                }
            }
            face_lines.push_back(line_no);
        } else if (tokens[0] == "vn" || tokens[0] == "vt" || tokens[0] == "o" || tokens[0] == "g" ||
                   tokens[0] == "s" || tokens[0] == "usemtl" || tokens[0] == "mtllib") {
            // ignored
        } else {
            obj_error(source_name, line_no, "unsupported record '" + std::string(tokens[0]) + "'");
        }
        if (end == text.size()) {
            break;
        }
    }
    std::vector<TriangleSurface> out;
    out.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        try {
            out.push_back(make_triangle(vertices[faces[f][0] - 1], vertices[faces[f][1] - 1],
                                        vertices[faces[f][2] - 1], material_id));
        } catch (const NumericError& e) {
            obj_error(source_name, face_lines[f], e.what());
        }
    }
    return out;
}

std::vector<TriangleSurface> import_obj(const std::filesystem::path& path, std::uint32_t material_id) {
    return parse_obj(detail::read_text(path), material_id, path.string());
}

Mat4 scale_translate(const Vec3& scale, const Vec3& translate) {
    return {scale.x, 0.0, 0.0, translate.x, 0.0, scale.y, 0.0, translate.y,
            0.0, 0.0, scale.z, translate.z, 0.0, 0.0, 0.0, 1.0};
}

std::vector<Surface> build_primitive(PrimitiveKind kind, const Mat4& transform, std::uint32_t material_id,
                                     const PrimitiveOptions& options) {
    const double det = linear_determinant(transform);
    if (!(std::abs(det) > 1e-12) || !std::isfinite(det)) {
        throw ValidationError("primitive transform is degenerate (zero scale)");
    }
    const Vec3 center = transform_point(transform, {0.0, 0.0, 0.0});
    const auto tp = [&](double x, double y, double z) { return transform_point(transform, {x, y, z}); };
    std::vector<Surface> out;
    switch (kind) {
    case PrimitiveKind::box: {
        constexpr double h = 0.5;
        // Faces listed as cyclic quads; orientation is fixed up against the centre.
        const std::array<std::array<Vec3, 4>, 6> faces{{
            {tp(h, -h, -h), tp(h, h, -h), tp(h, h, h), tp(h, -h, h)},
            {tp(-h, -h, -h), tp(-h, -h, h), tp(-h, h, h), tp(-h, h, -h)},
            {tp(-h, h, -h), tp(-h, h, h), tp(h, h, h), tp(h, h, -h)},
            {tp(-h, -h, -h), tp(h, -h, -h), tp(h, -h, h), tp(-h, -h, h)},
            {tp(-h, -h, h), tp(h, -h, h), tp(h, h, h), tp(-h, h, h)},
            {tp(-h, -h, -h), tp(-h, h, -h), tp(h, h, -h), tp(h, -h, -h)},
        }};
        for (const auto& q : faces) {
            emit_quad(out, q, center, material_id, options.rects);
        }
        break;
    }
    case PrimitiveKind::uv_sphere: {
        if (options.segments < 3 || options.rings < 2) {
            throw ValidationError("uv_sphere needs segments >= 3 and rings >= 2");
        }
        const auto ring_point = [&](std::uint32_t ring, std::uint32_t seg) {
            const double theta = std::numbers::pi * ring / options.rings;
            const double phi = 2.0 * std::numbers::pi * (seg % options.segments) / options.segments;
            return tp(std::sin(theta) * std::cos(phi), std::cos(theta), std::sin(theta) * std::sin(phi));
        };
        const Vec3 top = tp(0.0, 1.0, 0.0);
        const Vec3 bottom = tp(0.0, -1.0, 0.0);
        for (std::uint32_t s = 0; s < options.segments; ++s) {
            emit_triangle(out, top, ring_point(1, s), ring_point(1, s + 1), center, material_id);
        }
        for (std::uint32_t r = 1; r + 1 < options.rings; ++r) {
            for (std::uint32_t s = 0; s < options.segments; ++s) {
                emit_quad(out, {ring_point(r, s), ring_point(r + 1, s), ring_point(r + 1, s + 1), ring_point(r, s + 1)},
                          center, material_id, false);
            }
        }
        for (std::uint32_t s = 0; s < options.segments; ++s) {
            emit_triangle(out, bottom, ring_point(options.rings - 1, s + 1), ring_point(options.rings - 1, s), center,
                          material_id);
        }
        break;
    }
    case PrimitiveKind::plane: {
        const Vec3 corner = tp(-0.5, 0.0, 0.5);
        const Vec3 eu = transform_vector(transform, {1.0, 0.0, 0.0});
        const Vec3 ev = transform_vector(transform, {0.0, 0.0, -1.0});
        if (options.rects) {
            out.emplace_back(make_rect(corner, eu, ev, material_id));
        } else {
            out.emplace_back(make_triangle(corner, corner + eu, corner + eu + ev, material_id));
            out.emplace_back(make_triangle(corner, corner + eu + ev, corner + ev, material_id));
        }
        break;
    }
    }
    return out;
}

} // namespace nerfgt
