// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nerfgt/error.hpp"
#include "nerfgt/field.hpp"
#include "nerfgt/metrics.hpp"

namespace nerfgt {

inline constexpr int kDatasetFormatVersion = 1;

/// Raised when stored checksums do not match the array files.
class IntegrityError : public ValidationError {
public:
    explicit IntegrityError(const std::string& what) : ValidationError(what) {}
};

struct DatasetMeta {
    std::string scene_hash;
    std::uint64_t seed = 0;
    double t_max = 0.0;
    std::vector<Camera> cameras; // indexed by view id
    /// Optional train/novel ray index lists into the exported field.
    std::vector<std::uint32_t> train_rays;
    std::vector<std::uint32_t> novel_rays;
};

struct Dataset {
    DatasetMeta meta;
    ExplicitField field;
};

/// Writes `manifest.json` and one little-endian array file per column into `dir`.
/// Real values are stored as float32, ids as uint32.
void export_dataset(const ExplicitField& field, const DatasetMeta& meta, const std::filesystem::path& dir);

/// Reads a bundle back; checksums, shapes and field invariants are verified.
Dataset import_dataset(const std::filesystem::path& dir);

/// Writes a prediction dump: `sample_id` plus one array per parameter. Row i of every
/// array belongs to sample ids[i] of the referenced dataset.
void export_predictions(const std::filesystem::path& dir, const std::string& scene_hash, std::size_t n_pts,
                        std::span<const std::uint32_t> ids, std::span<const PredictionSet> sets);

/// Reads a prediction dump and aligns it to the dataset's samples by id.
std::vector<PredictionSet> import_predictions(const std::filesystem::path& dir, const Dataset& dataset);

} // namespace nerfgt
