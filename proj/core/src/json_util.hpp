// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace bidforge::detail {

using ojson = nlohmann::ordered_json;

/// Iterates non-blank lines, passing (1-based line number, line text).
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") != std::string_view::npos) fn(line_no, line);
        if (end == text.size()) break;
        start = end + 1;
    }
}

inline std::string dump_line(const ojson& j) {
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict) + "\n";
}

} // namespace bidforge::detail
