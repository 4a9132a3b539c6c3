// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/complexity.hpp"

#include <cmath>

#include "nerfgt/error.hpp"

namespace nerfgt {

std::vector<ShaderTerm> shader_terms(std::span<const ShaderSpec> specs, std::size_t light_count) {
    std::vector<ShaderTerm> terms;
    for (const auto& spec : specs) {
        if (!(spec.omega > 0.0)) {
            throw ValidationError("shader '" + spec.name + "': omega must be positive");
        }
        const double rho = static_cast<double>(spec.rho) * static_cast<double>(light_count);
        terms.push_back({spec.name, (256.0 / spec.omega) * (rho * static_cast<double>(spec.ord))});
    }
    return terms;
}

double shader_complexity(std::span<const ShaderSpec> specs, std::size_t light_count) {
    double lambda = 0.0;
    for (const auto& term : shader_terms(specs, light_count)) {
        lambda += term.value;
    }
    return lambda;
}

double position_spread(std::span<const Vec3> positions) {
    if (positions.size() < 2) {
        throw ValidationError("ray_position_std needs at least two positions");
    }
    const auto n = static_cast<double>(positions.size());
    Vec3 centroid;
    for (const auto& p : positions) {
        centroid += p;
    }
    centroid = centroid / n;
    double mean = 0.0;
    for (const auto& p : positions) {
        mean += length(p - centroid);
    }
    mean /= n;
    double sq = 0.0;
    for (const auto& p : positions) {
        const double d = length(p - centroid) - mean;
        sq += d * d;
    }
    return std::sqrt(sq / n);
}

std::vector<Vec3> field_positions(const ExplicitField& field, PositionBasis basis) {
    std::vector<Vec3> out;
    if (basis == PositionBasis::origins) {
        out.reserve(field.rays.size());
        for (const auto& r : field.rays) {
            out.push_back(r.origin);
        }
    } else {
        out.reserve(field.samples.size());
        for (const auto& s : field.samples) {
            out.push_back(s.position);
        }
    }
    return out;
}

double ray_position_std(const ExplicitField& field, PositionBasis basis) {
    return position_spread(field_positions(field, basis));
}

double task_complexity(double n_pts, double lambda, double std_train, double std_novel) {
    return n_pts * lambda * std::abs(std_train - std_novel);
}

ComplexityReport complexity_report(std::span<const ShaderSpec> specs, std::size_t light_count,
                                   const ExplicitField& train, const ExplicitField& novel, PositionBasis basis,
                                   std::optional<double> reported_lambda) {
    ComplexityReport report;
    report.terms = shader_terms(specs, light_count);
    for (const auto& t : report.terms) {
        report.lambda += t.value;
    }
    report.n_pts = train.n_pts();
    report.std_train = ray_position_std(train, basis);
    report.std_novel = ray_position_std(novel, basis);
    report.task = task_complexity(static_cast<double>(report.n_pts), report.lambda, report.std_train,
                                  report.std_novel);
    report.reported_lambda = reported_lambda;
    if (reported_lambda) {
        report.lambda_discrepancy = std::abs(report.lambda - *reported_lambda) > kLambdaTolerance;
    }
    return report;
}

std::vector<PublishedPreset> published_presets() {
    const ShaderSpec diffuse{"diffuse", ShaderKind::diffuse, 25, 1, 255.0, ShaderTarget::solid};
    const ShaderSpec glass{"glass", ShaderKind::diffuse, 25, 1, 255.0, ShaderTarget::glass};
    const ShaderSpec reflection{"reflection", ShaderKind::reflection, 1, 2, 2.0, ShaderTarget::glass};
    return {
        {"no_reflection", {diffuse, glass}, 50.0, 3.68e8, 1.04e6},
        {"reflection", {diffuse, glass, reflection}, 54.0, 3.98e8, 1.04e6},
    };
}

} // namespace nerfgt
