// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/concept_engine.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bidforge {

inline constexpr std::string_view kOtherCategory = "other";

/// Keyword lexicon grouped by category, in file order. `other` is always
/// present, always last when not declared, and never has keywords.
class BioLexicon {
public:
    struct Category {
        std::string name;
        std::vector<std::string> keywords;
    };

    /// Throws ValidationError on a duplicate category, a keyword shared by
    /// two categories, a multi-word keyword, or keywords under `other`.
    explicit BioLexicon(std::vector<Category> categories);

    const std::vector<Category>& categories() const noexcept { return categories_; }

    /// Category index for a token, accepting plural forms of keywords
    /// (s, es, y -> ies).
    std::optional<std::size_t> lookup(std::string_view token) const;

    std::size_t index_of(std::string_view name) const;

private:
    std::vector<Category> categories_;
    std::map<std::string, std::size_t, std::less<>> forms_;
};

/// `[category]` headers followed by one keyword per line; '#' starts a
/// comment. Throws FormatError (position = line) for a keyword before any
/// header.
BioLexicon parse_lexicon(std::string_view text);
BioLexicon load_lexicon(const std::string& path);

/// Category with the most keyword hits in the biomimicry text. Ties go to
/// the category hit first; no hits gives `other`.
std::string categorize_bio(const GeneratedConcept& generated, const BioLexicon& lexicon);

struct CategoryShare {
    std::string category;
    std::size_t count = 0;
    double percent = 0.0;
};

/// One entry per lexicon category, in lexicon order. Throws EmptyInput.
std::vector<CategoryShare> category_distribution(const std::vector<GeneratedConcept>& concepts,
                                                 const BioLexicon& lexicon);

std::string render_category_distribution(const std::vector<CategoryShare>& shares);

// ---- survey ---------------------------------------------------------------

inline constexpr std::string_view kBenchmarkGroup = "benchmark";

/// An externally sourced concept mixed into the survey as a control.
struct BenchmarkConcept {
    std::string id;
    std::string biomimicry;
    std::string innovation;
};

std::vector<BenchmarkConcept> read_benchmarks(const std::string& path);

struct SurveyKeyEntry {
    std::string label;
    std::string concept_id;
    std::string group;
};

/// Maps blind item labels back to concepts. Kept apart from the survey so
/// raters never see provenance.
struct SurveyKey {
    std::vector<SurveyKeyEntry> items;

    const SurveyKeyEntry* find(std::string_view label) const;
    /// concept_id -> group, for score_summary.
    std::map<std::string, std::string> concept_index() const;
};

std::string serialize_survey_key(const SurveyKey& key);
SurveyKey parse_survey_key(std::string_view text);
SurveyKey read_survey_key(const std::string& path);

struct SurveyDocument {
    std::string text;
    SurveyKey key;
};

/// Benchmark j of B sits at item index floor((j + 1) * T / (B + 1)) where T
/// is the total item count. Throws EmptyInput for no concepts.
SurveyDocument build_survey(const std::vector<GeneratedConcept>& concepts,
                            const std::vector<BenchmarkConcept>& benchmarks);

/// Writes the survey to `path` and its key to `path + ".key.json"`.
SurveyKey export_survey(const std::vector<GeneratedConcept>& concepts,
                        const std::vector<BenchmarkConcept>& benchmarks, const std::string& path);

struct ScoreRecord {
    std::string concept_id;
    std::string rater_id;
    int feasibility = 0;
    int novelty = 0;

    bool operator==(const ScoreRecord&) const = default;
};

struct Rejection {
    std::string source;
    std::string rater_id;
    std::string item;
    std::string reason; // "range", "missing", "format" or "unknown item"
};

struct ImportResult {
    std::vector<ScoreRecord> records;
    std::vector<Rejection> rejections;
    std::size_t responses = 0;
    std::size_t usable_responses = 0;
};

/// Parses filled-in survey text. Each `rater:` line opens a new response;
/// a response with any bad score is rejected whole. With `key`, item
/// labels are translated to concept ids. Throws FormatError (line) for a
/// score field outside an item or repeated within one.
ImportResult parse_scores(std::string_view text, const std::string& source,
                          const SurveyKey* key = nullptr);

/// `path` is a response file or a directory of them (read in name order).
ImportResult import_scores(const std::string& path, const SurveyKey* key = nullptr);

struct GroupScores {
    std::size_t count = 0;
    double mean_feasibility = 0.0;
    double mean_novelty = 0.0;
    /// Mean of the per-record (feasibility + novelty) / 2.
    double mean_average = 0.0;
    std::array<std::size_t, 5> feasibility_histogram{};
    std::array<std::size_t, 5> novelty_histogram{};
};

struct ScoreSummary {
    std::map<std::string, GroupScores> groups;
    std::size_t records = 0;
    std::size_t raters = 0;
};

/// Throws UnknownConcept (subject = id) for an id missing from the index.
ScoreSummary score_summary(const std::vector<ScoreRecord>& records,
                           const std::map<std::string, std::string>& concept_index);

std::string score_summary_to_json(const ScoreSummary& summary);
std::string render_score_summary(const ScoreSummary& summary);

} // namespace bidforge
