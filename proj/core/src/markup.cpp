// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/markup.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

#include <cctype>
#include <optional>

namespace bidforge {

namespace {

bool valid_tag(std::string_view tag) {
    if (tag.empty()) return false;
    for (char c : tag) {
        if (std::isalnum(static_cast<unsigned char>(c)) == 0) return false;
    }
    return true;
}

struct TagToken {
    std::string name;
    bool closing = false;
    std::size_t begin = 0;
    std::size_t end = 0; // one past ']'
};

// Finds the next well-formed [Tag] or [/Tag] at or after `from`.
std::optional<TagToken> next_tag(std::string_view text, std::size_t from) {
    for (std::size_t pos = text.find('[', from); pos != std::string_view::npos;
         pos = text.find('[', pos + 1)) {
        std::size_t p = pos + 1;
        bool closing = false;
        if (p < text.size() && text[p] == '/') {
            closing = true;
            ++p;
        }
        const std::size_t close = text.find(']', p);
        if (close == std::string_view::npos) return std::nullopt;
        const auto name = text.substr(p, close - p);
        if (valid_tag(name)) return TagToken{std::string(name), closing, pos, close + 1};
    }
    return std::nullopt;
}

[[noreturn]] void malformed(const std::string& why, std::size_t at) {
    throw Error(Errc::MalformedMarkup, why + " at offset " + std::to_string(at), {}, at);
}

} // namespace

std::string mark(std::string_view text, std::string_view tag) {
    if (!valid_tag(tag)) {
        throw Error(Errc::InvalidArgument, "tag must be non-empty alphanumeric: '" +
                                               std::string(tag) + "'");
    }
    std::string out;
    out.reserve(text.size() + 2 * tag.size() + 5);
    out += '[';
    out += tag;
    out += ']';
    out += text;
    out += "[/";
    out += tag;
    out += ']';
    return out;
}

std::map<std::string, std::string> parse_marked(std::string_view text) {
    std::map<std::string, std::string> blocks;
    std::size_t cursor = 0;
    auto require_blank = [&](std::size_t from, std::size_t to) {
        if (!trim(text.substr(from, to - from)).empty()) malformed("text outside marker blocks", from);
    };
    while (true) {
        const auto open = next_tag(text, cursor);
        if (!open) {
            require_blank(cursor, text.size());
            break;
        }
        require_blank(cursor, open->begin);
        if (open->closing) malformed("closing tag [/" + open->name + "] without opener", open->begin);
        const auto close = next_tag(text, open->end);
        if (!close) malformed("unclosed tag [" + open->name + "]", open->begin);
        if (!close->closing) {
            malformed(close->name == open->name ? "nested [" + open->name + "]"
                                                : "tag [" + close->name + "] opened inside [" +
                                                      open->name + "]",
                      close->begin);
        }
        if (close->name != open->name) {
            malformed("[/" + close->name + "] closes [" + open->name + "]", close->begin);
        }
        auto content = std::string(text.substr(open->end, close->begin - open->end));
        if (!blocks.emplace(open->name, std::move(content)).second) {
            malformed("repeated block [" + open->name + "]", open->begin);
        }
        cursor = close->end;
    }
    return blocks;
}

} // namespace bidforge
