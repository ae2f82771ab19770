// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bidforge {

/// One innovation sample: keyword lists plus the three descriptive paragraphs.
struct InnovationRecord {
    std::string id;
    std::vector<std::string> benefits;
    std::vector<std::string> applications;
    std::string challenge;
    std::string innovation;
    std::string biomimicry;

    bool operator==(const InnovationRecord&) const = default;
};

struct Corpus {
    std::vector<InnovationRecord> records;
    std::string source_path;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
};

/// Paragraph whitespace normalization; keywords additionally lowercased.
/// Both are idempotent.
std::string normalize_paragraph(std::string_view text);
std::string normalize_keyword(std::string_view keyword);

/// Applies paragraph/keyword normalization and keyword de-duplication
/// (first occurrence kept). Empty keywords are preserved so validation can
/// still report them.
InnovationRecord normalize_record(InnovationRecord record);

/// Each entry reads "<field>: <rule>". Empty iff the record is valid.
std::vector<std::string> validate_record(const InnovationRecord& record);

/// Loads the one-JSON-object-per-line corpus format. Throws MissingFile,
/// ParseError (position = 1-based line), ValidationError (subject = record
/// id, message names the field) or EmptyCorpus.
Corpus load_corpus(const std::string& path);

/// Parses corpus text directly; `source` is used for error messages only.
Corpus parse_corpus(std::string_view text, const std::string& source = "<memory>");

std::string serialize_record(const InnovationRecord& record);
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::string& path);

/// Seeded shuffle, then the first floor(f * n) records go to train. Each
/// side keeps the shuffled order.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, const SplitSpec& spec);

struct FieldWordStats {
    double mean_words = 0.0;
    std::size_t max_words = 0;
};

struct CorpusStats {
    std::size_t record_count = 0;
    FieldWordStats challenge;
    FieldWordStats innovation;
    FieldWordStats biomimicry;
    /// Sorted by descending frequency, ties by keyword.
    std::vector<std::pair<std::string, std::size_t>> top_applications;
};

CorpusStats corpus_stats(const Corpus& corpus, std::size_t top_k = 20);

std::string stats_to_json(const CorpusStats& stats);

} // namespace bidforge
