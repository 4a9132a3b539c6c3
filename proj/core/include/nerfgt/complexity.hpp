// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nerfgt/field.hpp"

namespace nerfgt {

/// Per-shader cost (256 / omega) * rho * ord.
struct ShaderTerm {
    std::string name;
    double value = 0.0;
};

/// Shader complexity: sum over shaders of (256 / omega) * (rho * lights) * ord.
/// `light_count` multiplies each rho. Throws ValidationError for omega <= 0.
double shader_complexity(std::span<const ShaderSpec> specs, std::size_t light_count = 1);
std::vector<ShaderTerm> shader_terms(std::span<const ShaderSpec> specs, std::size_t light_count = 1);

enum class PositionBasis { origins, samples };

/// Population standard deviation of Euclidean distances from the centroid.
/// Throws ValidationError for fewer than two positions.
double position_spread(std::span<const Vec3> positions);

/// Collects ray origins (one per ray) or sample positions of a field.
std::vector<Vec3> field_positions(const ExplicitField& field, PositionBasis basis);

double ray_position_std(const ExplicitField& field, PositionBasis basis);

/// n_pts * lambda * |std_train - std_novel|.
double task_complexity(double n_pts, double lambda, double std_train, double std_novel);

/// Absolute gap above which a published lambda is flagged as inconsistent.
inline constexpr double kLambdaTolerance = 0.5;

struct ComplexityReport {
    double lambda = 0.0;
    std::vector<ShaderTerm> terms;
    std::size_t n_pts = 0;
    double std_train = 0.0;
    double std_novel = 0.0;
    double task = 0.0; // Lambda
    std::optional<double> reported_lambda;
    /// Set when |lambda - reported_lambda| > kLambdaTolerance.
    bool lambda_discrepancy = false;
};

/// Full report for a train/novel split. n_pts counts all training samples,
/// empty-space samples included.
ComplexityReport complexity_report(std::span<const ShaderSpec> specs, std::size_t light_count,
                                   const ExplicitField& train, const ExplicitField& novel, PositionBasis basis,
                                   std::optional<double> reported_lambda = std::nullopt);

/// Shader tables of the published ball-scene experiment and their reported values.
struct PublishedPreset {
    std::string name;
    std::vector<ShaderSpec> shaders;
    double reported_lambda = 0.0;
    double reported_task = 0.0;
    double reported_n_pts = 0.0;
};

std::vector<PublishedPreset> published_presets();

} // namespace nerfgt
