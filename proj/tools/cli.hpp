// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nerfgt::cli {

/// Exit codes: 0 success, 1 unexpected failure, 2 validation, 3 I/O, 4 numeric guard.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

/// Seed used when --seed is not given.
inline constexpr unsigned long long kDefaultSeed = 0;

/// Environment variable naming the default output root for --out.
inline constexpr const char* kOutputRootEnv = "NERFGT_OUTPUT_ROOT";

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nerfgt::cli
