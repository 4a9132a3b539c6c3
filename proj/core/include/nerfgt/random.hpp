// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace nerfgt {

/// Named sub-streams derived from a single run seed.
enum class StreamTag : std::uint64_t {
    light_sampling = 0x6c69676874ULL, // "light"
    bounce_sampling = 0x626f756e6365ULL, // "bounce"
    split = 0x73706c6974ULL, // "split"
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(tag)) + index);
}

/// Deterministic random stream. mt19937_64's output sequence is fixed by the
/// standard; the conversions below avoid the implementation-defined std
/// distributions so results are identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace nerfgt
