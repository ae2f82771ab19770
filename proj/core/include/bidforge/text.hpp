// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace bidforge {

std::string trim(std::string_view s);

/// Trims and collapses every internal whitespace run to a single space.
std::string normalize_whitespace(std::string_view s);

std::string to_lower(std::string_view s);

/// Lowercases and splits on any run of ASCII non-alphanumeric bytes. Bytes
/// >= 0x80 are kept inside tokens so UTF-8 letters are not split apart.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// 64-bit FNV-1a. Stable across processes and platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Uniform integer in [0, bound) without the implementation-defined
/// behaviour of std::uniform_int_distribution, so seeded runs replay exactly
/// across standard libraries.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates shuffle driven by uniform_index.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace bidforge
