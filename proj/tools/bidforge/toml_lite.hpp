// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bidforge::cli {

// A small TOML subset: [section] headers, key = value lines, basic strings,
// integers, floats, booleans and single-line string arrays. Order is kept
// so serialization is byte-stable.
using TomlValue = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>>;

struct TomlSection {
    std::string name;
    std::vector<std::pair<std::string, TomlValue>> entries;

    const TomlValue* find(std::string_view key) const;
    void set(std::string key, TomlValue value);
};

struct TomlDocument {
    std::vector<TomlSection> sections;

    const TomlSection* find(std::string_view name) const;
    TomlSection& section(std::string_view name);
};

/// Throws ParseError with the 1-based line as position.
TomlDocument parse_toml(std::string_view text, const std::string& source = "<memory>");
std::string serialize_toml(const TomlDocument& doc);

std::string toml_quote(std::string_view s);

} // namespace bidforge::cli
