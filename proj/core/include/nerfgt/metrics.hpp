// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nerfgt/field.hpp"
#include "nerfgt/render.hpp"

namespace nerfgt {

enum class Parameter { colour, density, depth, delta };

std::string_view parameter_name(Parameter p);
Parameter parse_parameter(std::string_view name);
int parameter_channels(Parameter p);

/// Predicted values for one parameter, aligned with a field's samples:
/// values[i * channels + ch] belongs to field.samples[i].
struct PredictionSet {
    Parameter parameter = Parameter::colour;
    std::vector<double> values;
};

/// Ground-truth values of `p` laid out like PredictionSet::values.
std::vector<double> ground_truth_values(const ExplicitField& field, Parameter p);

/// Per-view values with their mean and population standard deviation.
struct MetricReport {
    std::string name;
    std::vector<std::uint32_t> view_ids;
    std::vector<double> per_view;
    double mean = 0.0;
    double stddev = 0.0;
};

MetricReport make_report(std::string name, std::vector<std::uint32_t> view_ids, std::vector<double> per_view);

/// Mean absolute error per view (colour channels averaged), then mean +- std over views.
/// Views without samples are skipped.
MetricReport wape(const PredictionSet& pred, const ExplicitField& field);

/// 10 log10(peak^2 / MSE) over all channels; +infinity for identical images.
double psnr(const Image& a, const Image& b, double peak = 1.0);

/// Tabular cap for infinite PSNR.
inline constexpr double kPsnrCap = 99.0;

/// Windowed SSIM (11x11 Gaussian, sigma 1.5, K1 0.01, K2 0.03, data range 1) over
/// valid windows, computed per channel and averaged. Needs at least 11x11 pixels.
double ssim(const Image& a, const Image& b);

/// Per-view PSNR over sample depths with peak = t_max.
MetricReport depth_psnr(const PredictionSet& pred, const ExplicitField& field, double peak);

/// Copy of `field` with each prediction set's parameter substituted.
ExplicitField apply_predictions(const ExplicitField& field, std::span<const PredictionSet> sets);

} // namespace nerfgt
