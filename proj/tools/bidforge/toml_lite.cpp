// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "toml_lite.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace bidforge::cli {

namespace {

class LineParser {
public:
    LineParser(std::string_view line, std::size_t line_no, const std::string& source)
        : s_(line), line_no_(line_no), source_(source) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::ParseError, what, source_, line_no_);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool at_end_or_comment() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    std::string key() {
        skip_ws();
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '-' || s_[pos_] == '.')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string string() {
        expect('"');
        std::string out;
        while (true) {
            if (pos_ >= s_.size()) fail("unterminated string");
            const char c = s_[pos_++];
            if (c == '"') return out;
            if (c != '\\') {
                out.push_back(c);
                continue;
            }
            if (pos_ >= s_.size()) fail("unterminated escape");
            switch (s_[pos_++]) {
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            default: fail("unsupported escape");
            }
        }
    }

    TomlValue value() {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') return string();
        if (c == '[') {
            ++pos_;
            std::vector<std::string> items;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ']') {
                ++pos_;
                return items;
            }
            while (true) {
                items.push_back(string());
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                    if (pos_ < s_.size() && s_[pos_] == ']') {
                        ++pos_;
                        return items;
                    }
                    continue;
                }
                expect(']');
                return items;
            }
        }
        const auto start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '#') ++pos_;
        const auto word = s_.substr(start, pos_ - start);
        if (word == "true") return true;
        if (word == "false") return false;
        std::int64_t i = 0;
        auto [ip, iec] = std::from_chars(word.data(), word.data() + word.size(), i);
        if (iec == std::errc() && ip == word.data() + word.size()) return i;
        double d = 0.0;
        auto [dp, dec] = std::from_chars(word.data(), word.data() + word.size(), d);
        if (dec == std::errc() && dp == word.data() + word.size() && std::isfinite(d)) return d;
        fail("unrecognized value '" + std::string(word) + "'");
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_no_;
    const std::string& source_;
};

std::string format_value(const TomlValue& v) {
    struct Visitor {
        std::string operator()(const std::string& s) const { return toml_quote(s); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            char buf[64];
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
            std::string out(buf, p);
            if (out.find_first_of(".eE") == std::string::npos) out += ".0";
            return out;
        }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const std::vector<std::string>& items) const {
            std::string out = "[";
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out += ", ";
                out += toml_quote(items[i]);
            }
            return out + "]";
        }
    };
    return std::visit(Visitor{}, v);
}

} // namespace

const TomlValue* TomlSection::find(std::string_view key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

void TomlSection::set(std::string key, TomlValue value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries.emplace_back(std::move(key), std::move(value));
}

const TomlSection* TomlDocument::find(std::string_view name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

TomlSection& TomlDocument::section(std::string_view name) {
    for (auto& s : sections) {
        if (s.name == name) return s;
    }
    sections.push_back({std::string(name), {}});
    return sections.back();
}

std::string toml_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    return out + "\"";
}

TomlDocument parse_toml(std::string_view text, const std::string& source) {
    TomlDocument doc;
    doc.sections.push_back({"", {}});
    std::size_t current = 0;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        LineParser p(line, line_no, source);
        if (!p.at_end_or_comment()) {
            const auto t = trim(line);
            if (t.front() == '[') {
                const auto close = t.find(']');
                if (close == std::string::npos) p.fail("unterminated section header");
                const auto name = trim(std::string_view(t).substr(1, close - 1));
                if (name.empty()) p.fail("empty section name");
                if (doc.find(name)) p.fail("duplicate section [" + name + "]");
                doc.sections.push_back({name, {}});
                current = doc.sections.size() - 1;
                LineParser rest(std::string_view(t).substr(close + 1), line_no, source);
                if (!rest.at_end_or_comment()) rest.fail("text after section header");
            } else {
                auto key = p.key();
                p.expect('=');
                auto value = p.value();
                if (!p.at_end_or_comment()) p.fail("text after value");
                auto& sec = doc.sections[current];
                if (sec.find(key)) p.fail("duplicate key '" + key + "'");
                sec.entries.emplace_back(std::move(key), std::move(value));
            }
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    if (doc.sections.front().entries.empty()) doc.sections.erase(doc.sections.begin());
    return doc;
}

std::string serialize_toml(const TomlDocument& doc) {
    std::ostringstream out;
    bool first = true;
    for (const auto& sec : doc.sections) {
        if (!sec.name.empty()) {
            if (!first) out << "\n";
            out << "[" << sec.name << "]\n";
        }
        for (const auto& [k, v] : sec.entries) out << k << " = " << format_value(v) << "\n";
        first = false;
    }
    return out.str();
}

} // namespace bidforge::cli
