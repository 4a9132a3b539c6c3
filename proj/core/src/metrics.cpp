// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "nerfgt/error.hpp"

namespace nerfgt {

std::string_view parameter_name(Parameter p) {
    switch (p) {
    case Parameter::colour:
        return "colour";
    case Parameter::density:
        return "density";
    case Parameter::depth:
        return "depth";
    case Parameter::delta:
        return "delta";
    }
    return "unknown";
}

Parameter parse_parameter(std::string_view name) {
    for (Parameter p : {Parameter::colour, Parameter::density, Parameter::depth, Parameter::delta}) {
        if (parameter_name(p) == name) {
            return p;
        }
    }
    throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

int parameter_channels(Parameter p) { return p == Parameter::colour ? 3 : 1; }

std::vector<double> ground_truth_values(const ExplicitField& field, Parameter p) {
    std::vector<double> out;
    out.reserve(field.samples.size() * static_cast<std::size_t>(parameter_channels(p)));
    for (const auto& s : field.samples) {
        switch (p) {
        case Parameter::colour:
            out.insert(out.end(), s.colour.begin(), s.colour.end());
            break;
        case Parameter::density:
            out.push_back(s.density);
            break;
        case Parameter::depth:
            out.push_back(s.t);
            break;
        case Parameter::delta:
            out.push_back(s.delta_prime);
            break;
        }
    }
    return out;
}

MetricReport make_report(std::string name, std::vector<std::uint32_t> view_ids, std::vector<double> per_view) {
    MetricReport report;
    report.name = std::move(name);
    report.view_ids = std::move(view_ids);
    report.per_view = std::move(per_view);
    const auto n = static_cast<double>(report.per_view.size());
    if (report.per_view.empty()) {
        report.mean = std::numeric_limits<double>::quiet_NaN();
        report.stddev = std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    double sum = 0.0;
    for (double v : report.per_view) {
        sum += v;
    }
    report.mean = sum / n;
    if (std::isinf(report.mean)) {
        report.stddev = std::all_of(report.per_view.begin(), report.per_view.end(),
                                    [&](double v) { return v == report.mean; })
                            ? 0.0
                            : std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    double sq = 0.0;
    for (double v : report.per_view) {
        sq += (v - report.mean) * (v - report.mean);
    }
    report.stddev = std::sqrt(sq / n);
    return report;
}

namespace {

void check_alignment(const PredictionSet& pred, const ExplicitField& field) {
    const std::size_t expected = field.samples.size() * static_cast<std::size_t>(parameter_channels(pred.parameter));
    if (pred.values.size() != expected) {
        throw ValidationError("predictions for '" + std::string(parameter_name(pred.parameter)) + "' have " +
                              std::to_string(pred.values.size()) + " values; field needs " + std::to_string(expected));
    }
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        if (!std::isfinite(pred.values[i])) {
            throw ValidationError("prediction value at index " + std::to_string(i) + " is not finite");
        }
    }
}

// Per-view accumulation in field view order.
template <class PerSample, class Finish>
MetricReport per_view_metric(const std::string& name, const ExplicitField& field, PerSample per_sample,
                             Finish finish) {
    std::map<std::uint32_t, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < field.samples.size(); ++i) {
        auto& [sum, count] = acc[field.samples[i].view_id];
        sum += per_sample(i);
        ++count;
    }
    std::vector<std::uint32_t> ids;
    std::vector<double> values;
    for (const auto& view : field.views) {
        const auto it = acc.find(view.view_id);
        if (it == acc.end() || it->second.second == 0) {
            continue;
        }
        ids.push_back(view.view_id);
        values.push_back(finish(it->second.first, it->second.second));
    }
    return make_report(name, std::move(ids), std::move(values));
}

double psnr_from_mse(double mse, double peak) {
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(peak * peak / mse);
}

} // namespace

MetricReport wape(const PredictionSet& pred, const ExplicitField& field) {
    check_alignment(pred, field);
    const std::vector<double> truth = ground_truth_values(field, pred.parameter);
    const int ch = parameter_channels(pred.parameter);
    return per_view_metric(
        "wape_" + std::string(parameter_name(pred.parameter)), field,
        [&](std::size_t i) {
            double err = 0.0;
            for (int c = 0; c < ch; ++c) {
                err += std::abs(truth[i * ch + c] - pred.values[i * ch + c]);
            }
            return err / ch;
        },
        [](double sum, std::size_t count) { return sum / static_cast<double>(count); });
}

double psnr(const Image& a, const Image& b, double peak) {
    if (a.width != b.width || a.height != b.height) {
        throw ValidationError("psnr: image dimensions differ");
    }
    if (a.pixels.empty()) {
        throw ValidationError("psnr: images are empty");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            const double d = a.pixels[i][ch] - b.pixels[i][ch];
            sq += d * d;
        }
    }
    return psnr_from_mse(sq / (3.0 * static_cast<double>(a.pixels.size())), peak);
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

std::array<double, kSsimWindow> gaussian_taps() {
    std::array<double, kSsimWindow> taps{};
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        const double x = i - kSsimWindow / 2;
        taps[i] = std::exp(-(x * x) / (2.0 * kSsimSigma * kSsimSigma));
        sum += taps[i];
    }
    for (auto& t : taps) {
        t /= sum;
    }
    return taps;
}

// Separable "valid" Gaussian filter on a single-channel plane.
std::vector<double> filter_valid(const std::vector<double>& plane, std::uint32_t w, std::uint32_t h,
                                 const std::array<double, kSsimWindow>& taps) {
    const std::uint32_t ow = w - kSsimWindow + 1;
    const std::uint32_t oh = h - kSsimWindow + 1;
    std::vector<double> horiz(static_cast<std::size_t>(ow) * h);
    for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < kSsimWindow; ++k) {
                s += taps[k] * plane[static_cast<std::size_t>(y) * w + x + k];
            }
            horiz[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (std::uint32_t y = 0; y < oh; ++y) {
        for (std::uint32_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < kSsimWindow; ++k) {
                s += taps[k] * horiz[static_cast<std::size_t>(y + k) * ow + x];
            }
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

} // namespace

double ssim(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height) {
        throw ValidationError("ssim: image dimensions differ");
    }
    if (a.width < kSsimWindow || a.height < kSsimWindow) {
        throw ValidationError("ssim: images must be at least 11x11 pixels");
    }
    constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
    constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);
    const auto taps = gaussian_taps();
    const std::size_t n = a.pixels.size();
    double total = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
        std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] = a.pixels[i][ch];
            pb[i] = b.pixels[i][ch];
            paa[i] = pa[i] * pa[i];
            pbb[i] = pb[i] * pb[i];
            pab[i] = pa[i] * pb[i];
        }
        const auto mu_a = filter_valid(pa, a.width, a.height, taps);
        const auto mu_b = filter_valid(pb, a.width, a.height, taps);
        const auto e_aa = filter_valid(paa, a.width, a.height, taps);
        const auto e_bb = filter_valid(pbb, a.width, a.height, taps);
        const auto e_ab = filter_valid(pab, a.width, a.height, taps);
        double sum = 0.0;
        for (std::size_t i = 0; i < mu_a.size(); ++i) {
            const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
            const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
            const double cov = e_ab[i] - mu_a[i] * mu_b[i];
            const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
            const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
            sum += num / den;
        }
        total += sum / static_cast<double>(mu_a.size());
    }
    return total / 3.0;
}

MetricReport depth_psnr(const PredictionSet& pred, const ExplicitField& field, double peak) {
    if (pred.parameter != Parameter::depth) {
        throw ValidationError("depth_psnr requires depth predictions");
    }
    check_alignment(pred, field);
    return per_view_metric(
        "depth_psnr", field,
        [&](std::size_t i) {
            const double d = field.samples[i].t - pred.values[i];
            return d * d;
        },
        [&](double sum, std::size_t count) { return psnr_from_mse(sum / static_cast<double>(count), peak); });
}

ExplicitField apply_predictions(const ExplicitField& field, std::span<const PredictionSet> sets) {
    ExplicitField out = field;
    bool depth_changed = false;
    for (const auto& set : sets) {
        check_alignment(set, field);
        for (std::size_t i = 0; i < out.samples.size(); ++i) {
            RaySample& s = out.samples[i];
            switch (set.parameter) {
            case Parameter::colour:
                s.colour = {set.values[3 * i], set.values[3 * i + 1], set.values[3 * i + 2]};
                break;
            case Parameter::density:
                s.density = set.values[i];
                break;
            case Parameter::depth:
                s.t = set.values[i];
                depth_changed = true;
                break;
            case Parameter::delta:
                s.delta_prime = set.values[i];
                break;
            }
        }
    }
    if (depth_changed) {
        for (const auto& rec : out.rays) {
            auto first = out.samples.begin() + rec.first_sample;
            std::stable_sort(first, first + rec.sample_count,
                             [](const RaySample& a, const RaySample& b) { return a.t < b.t; });
        }
    }
    return out;
}

} // namespace nerfgt
