// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <map>
#include <string>
#include <string_view>

namespace bidforge {

/// "[Tag]text[/Tag]". Tag must be non-empty ASCII alphanumeric.
std::string mark(std::string_view text, std::string_view tag);

/// Splits flat, non-nested `[Tag]...[/Tag]` blocks into tag -> content.
/// Whitespace between blocks is ignored; any other text outside a block, an
/// unclosed block, a tag opened inside another block, a mismatched closer or
/// a repeated tag throws MalformedMarkup.
std::map<std::string, std::string> parse_marked(std::string_view text);

} // namespace bidforge
