// Copyright 2026 The nerfgt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nerfgt/hash.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "nerfgt/error.hpp"

namespace nerfgt {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256: digest computation failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

} // namespace nerfgt
