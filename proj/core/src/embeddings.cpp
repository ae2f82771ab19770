// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/embeddings.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>

namespace bidforge {

namespace {

[[noreturn]] void format_error(const std::string& why, std::size_t offset) {
    throw Error(Errc::FormatError, why + " at byte offset " + std::to_string(offset), {}, offset);
}

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0xff) << 24) | ((v & 0xff00) << 8) | ((v >> 8) & 0xff00) | (v >> 24);
    }
    return v;
}

struct Header {
    std::size_t vocab = 0;
    std::size_t dim = 0;
    std::size_t end = 0; // offset just past the header newline
};

Header parse_header(std::string_view bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string_view::npos) format_error("missing header line", 0);
    const auto line = trim(bytes.substr(0, nl));
    Header h;
    const char* p = line.data();
    const char* e = line.data() + line.size();
    auto r1 = std::from_chars(p, e, h.vocab);
    if (r1.ec != std::errc{}) format_error("bad vocabulary size in header", 0);
    p = r1.ptr;
    while (p < e && *p == ' ') ++p;
    auto r2 = std::from_chars(p, e, h.dim);
    if (r2.ec != std::errc{} || r2.ptr != e) format_error("bad dimension in header", 0);
    if (h.dim == 0) format_error("dimension must be positive", 0);
    h.end = nl + 1;
    return h;
}

void add_entry(EmbeddingTable& table, std::string word, std::span<const float> v,
               std::vector<std::string>* warnings) {
    if (!table.add(word, v) && warnings) {
        warnings->push_back("duplicate word '" + word + "' ignored; first vector kept");
    }
}

EmbeddingTable parse_text(std::string_view bytes, std::vector<std::string>* warnings) {
    const auto h = parse_header(bytes);
    EmbeddingTable table(h.dim);
    std::vector<float> v(h.dim);
    std::size_t pos = h.end;
    std::size_t entries = 0;
    while (pos < bytes.size()) {
        auto nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos) nl = bytes.size();
        auto line = bytes.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto line_start = pos;
        pos = nl + 1;
        if (trim(line).empty()) continue;
        if (entries == h.vocab) format_error("more entries than the header declares", line_start);

        std::size_t i = 0;
        auto next_field = [&]() -> std::string_view {
            while (i < line.size() && line[i] == ' ') ++i;
            const auto b = i;
            while (i < line.size() && line[i] != ' ') ++i;
            return line.substr(b, i - b);
        };
        const std::string word(next_field());
        std::size_t k = 0;
        for (auto f = next_field(); !f.empty(); f = next_field()) {
            if (k == h.dim) {
                throw Error(Errc::DimensionMismatch,
                            "word '" + word + "' has more than " + std::to_string(h.dim) + " values",
                            word, line_start);
            }
            float x = 0;
            const auto r = std::from_chars(f.data(), f.data() + f.size(), x);
            if (r.ec != std::errc{} || r.ptr != f.data() + f.size()) {
                format_error("bad number '" + std::string(f) + "' for word '" + word + "'", line_start);
            }
            v[k++] = x;
        }
        if (k != h.dim) {
            throw Error(Errc::DimensionMismatch,
                        "word '" + word + "' has " + std::to_string(k) + " values, expected " +
                            std::to_string(h.dim),
                        word, line_start);
        }
        add_entry(table, word, v, warnings);
        ++entries;
    }
    if (entries != h.vocab) {
        format_error("header declares " + std::to_string(h.vocab) + " entries, found " +
                         std::to_string(entries),
                     bytes.size());
    }
    return table;
}

EmbeddingTable parse_binary(std::string_view bytes, std::vector<std::string>* warnings) {
    const auto h = parse_header(bytes);
    EmbeddingTable table(h.dim);
    std::vector<float> v(h.dim);
    std::size_t pos = h.end;
    for (std::size_t entry = 0; entry < h.vocab; ++entry) {
        while (pos < bytes.size() && bytes[pos] == '\n') ++pos;
        const auto word_start = pos;
        const auto sp = bytes.find(' ', pos);
        if (sp == std::string_view::npos) format_error("truncated word", word_start);
        std::string word(bytes.substr(word_start, sp - word_start));
        if (word.empty()) format_error("empty word", word_start);
        pos = sp + 1;
        const auto need = h.dim * sizeof(float);
        if (bytes.size() - pos < need) format_error("truncated vector for '" + word + "'", pos);
        for (std::size_t k = 0; k < h.dim; ++k) {
            std::uint32_t raw = 0;
            std::memcpy(&raw, bytes.data() + pos + k * sizeof(float), sizeof raw);
            v[k] = std::bit_cast<float>(to_little_endian(raw));
        }
        pos += need;
        add_entry(table, std::move(word), v, warnings);
    }
    while (pos < bytes.size() && bytes[pos] == '\n') ++pos;
    if (pos != bytes.size()) format_error("trailing bytes after declared entries", pos);
    return table;
}

} // namespace

EmbeddingFormat parse_embedding_format(std::string_view s) {
    const auto v = to_lower(s);
    if (v == "text" || v == "txt") return EmbeddingFormat::Text;
    if (v == "binary" || v == "bin") return EmbeddingFormat::Binary;
    throw Error(Errc::InvalidArgument, "unknown embedding format '" + std::string(s) + "'");
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw Error(Errc::InvalidArgument, "embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string word, std::span<const float> vector) {
    if (vector.size() != dim_) {
        throw Error(Errc::DimensionMismatch,
                    "vector for '" + word + "' has length " + std::to_string(vector.size()) +
                        ", expected " + std::to_string(dim_),
                    word);
    }
    if (index_.contains(word)) return false;
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    data_.insert(data_.end(), vector.begin(), vector.end());
    return true;
}

std::optional<std::span<const float>> EmbeddingTable::find(std::string_view word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return vector(it->second);
}

std::span<const float> EmbeddingTable::vector(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * dim_, dim_);
}

bool EmbeddingTable::operator==(const EmbeddingTable& other) const {
    if (dim_ != other.dim_ || words_ != other.words_ || data_.size() != other.data_.size()) return false;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (std::bit_cast<std::uint32_t>(data_[i]) != std::bit_cast<std::uint32_t>(other.data_[i])) {
            return false;
        }
    }
    return true;
}

EmbeddingTable parse_embeddings(std::string_view bytes, EmbeddingFormat format,
                                std::vector<std::string>* warnings) {
    return format == EmbeddingFormat::Text ? parse_text(bytes, warnings)
                                           : parse_binary(bytes, warnings);
}

EmbeddingTable load_embeddings(const std::string& path, EmbeddingFormat format,
                               std::vector<std::string>* warnings) {
    return parse_embeddings(read_file(path), format, warnings);
}

std::string serialize_embeddings(const EmbeddingTable& table, EmbeddingFormat format) {
    std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
    char buf[64];
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& w = table.word(i);
        if (w.empty() || w.find_first_of(" \n") != std::string::npos) {
            throw Error(Errc::InvalidArgument, "word '" + w + "' cannot be serialized", w);
        }
        out += w;
        const auto v = table.vector(i);
        if (format == EmbeddingFormat::Text) {
            for (float x : v) {
                const auto r = std::to_chars(buf, buf + sizeof buf, x);
                out += ' ';
                out.append(buf, r.ptr);
            }
        } else {
            out += ' ';
            for (float x : v) {
                const auto raw = to_little_endian(std::bit_cast<std::uint32_t>(x));
                char b[sizeof raw];
                std::memcpy(b, &raw, sizeof raw);
                out.append(b, sizeof raw);
            }
        }
        out += '\n';
    }
    return out;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path, EmbeddingFormat format) {
    write_file(path, serialize_embeddings(table, format));
}

} // namespace bidforge
