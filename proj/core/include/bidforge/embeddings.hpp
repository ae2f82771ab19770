// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bidforge {

enum class EmbeddingFormat { Text, Binary };

EmbeddingFormat parse_embedding_format(std::string_view s);

/// Word -> float vector table, all vectors of one dimension. Row-major
/// storage in insertion order.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

    /// Returns false (and leaves the table unchanged) if `word` is present.
    /// Throws DimensionMismatch if the vector length differs from dim().
    bool add(std::string word, std::span<const float> vector);

    std::optional<std::span<const float>> find(std::string_view word) const;
    bool contains(std::string_view word) const { return index_.find(word) != index_.end(); }

    const std::string& word(std::size_t i) const { return words_.at(i); }
    std::span<const float> vector(std::size_t i) const;

    bool operator==(const EmbeddingTable& other) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<float> data_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses the word2vec text or binary layout. Duplicate words keep the first
/// vector and add a message to `warnings` when given. Throws FormatError
/// (position = byte offset) or DimensionMismatch (subject = word).
EmbeddingTable parse_embeddings(std::string_view bytes, EmbeddingFormat format,
                                std::vector<std::string>* warnings = nullptr);

EmbeddingTable load_embeddings(const std::string& path, EmbeddingFormat format,
                               std::vector<std::string>* warnings = nullptr);

/// Text floats use the shortest representation that round-trips; binary
/// floats are 4-byte little-endian IEEE-754, one '\n' after each entry.
std::string serialize_embeddings(const EmbeddingTable& table, EmbeddingFormat format);
void save_embeddings(const EmbeddingTable& table, const std::string& path, EmbeddingFormat format);

} // namespace bidforge
