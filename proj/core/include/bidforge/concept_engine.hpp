// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/domain.hpp"
#include "bidforge/llm_gateway.hpp"
#include "bidforge/prompt_forge.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bidforge {

inline constexpr int kDefaultRetryCap = 3;
inline constexpr double kDefaultThreshold = 0.5;

struct ProblemSpec {
    std::vector<std::string> applications;
    std::vector<std::string> benefits;
    std::string challenge;

    bool operator==(const ProblemSpec&) const = default;
};

struct GeneratedConcept {
    std::string concept_id;
    GeneratorType gtype = GeneratorType::Type1;
    ProblemSpec spec;
    std::string biomimicry;
    std::string innovation;
    std::string raw;
    std::string model_id;

    bool operator==(const GeneratedConcept&) const = default;
};

struct ConceptEvaluation {
    std::string concept_id;
    GeneratorType gtype = GeneratorType::Type1;
    double threshold = kDefaultThreshold;
    std::map<EvaluatorPair, Verdict> verdicts;
    std::map<EvaluatorPair, bool> passed;
    bool overall = false;
};

struct RateCell {
    std::size_t passing = 0;
    std::size_t total = 0;
    /// Whole-number percent, rounded half up.
    int percent() const;
};

struct PassRateRow {
    GeneratorType gtype = GeneratorType::Type1;
    std::optional<RateCell> problem_solution; // absent for Type-1
    RateCell nature_solution;
    RateCell overall;
};

struct PassRateTable {
    std::vector<PassRateRow> rows; // ordered Type-1, Type-2, Type-3
};

/// Pairs evaluated for a generator type: {Bio}, {Ben, Bio}, {Cha, Bio}.
std::vector<EvaluatorPair> applicable_pairs(GeneratorType type);

/// The problem-side pair for Type-2/3, nothing for Type-1.
std::optional<EvaluatorPair> problem_pair(GeneratorType type);

/// Identical bytes to the training-time prompt for the same fields.
std::string assemble_prompt(const ProblemSpec& spec, GeneratorType type);

/// Returns the trimmed (biomimicry, innovation) blocks. Throws
/// MalformedMarkup when either block is missing, EmptyBlock when one is blank.
std::pair<std::string, std::string> parse_generation(const std::string& raw);

struct GenerationParams {
    std::string model_id;
    std::string run_id = "run";
    SamplingParams sampling;
    int retry_cap = kDefaultRetryCap;
    std::size_t workers = 8;
};

struct GenerationSkip {
    std::size_t slot = 0;
    int attempt = 0;
    std::string reason;
};

struct GenerationResult {
    std::vector<GeneratedConcept> concepts; // ordered by slot
    std::vector<GenerationSkip> skipped;    // one entry per failed attempt
};

/// Requests one completion per slot (nonce = slot * (retry_cap + 1) +
/// attempt), retrying malformed outputs up to `retry_cap` times. Concept ids
/// are "{run_id}-{slot}". Throws InvalidArgument for n == 0 and AllMalformed
/// when no slot yields a parseable concept.
GenerationResult generate_concepts(Gateway& gateway, const ProblemSpec& spec, GeneratorType type,
                                   std::size_t n, const GenerationParams& params);

/// Recomputes passes from existing verdicts at a new threshold.
void apply_threshold(ConceptEvaluation& evaluation, double threshold);

ConceptEvaluation evaluate_concept(Gateway& gateway, const GeneratedConcept& generated,
                                   const std::map<EvaluatorPair, std::string>& evaluator_models,
                                   double threshold = kDefaultThreshold);

std::vector<ConceptEvaluation> evaluate_concepts(
    Gateway& gateway, const std::vector<GeneratedConcept>& concepts,
    const std::map<EvaluatorPair, std::string>& evaluator_models,
    double threshold = kDefaultThreshold, std::size_t workers = 8);

/// One row for a single generator type. Throws EmptyInput or MixedTypes.
PassRateRow aggregate(const std::vector<ConceptEvaluation>& evaluations);

/// Groups by type and aggregates each group.
PassRateTable aggregate_by_type(const std::vector<ConceptEvaluation>& evaluations);

/// Argmax accuracy of a classifier over labeled examples.
double measure_accuracy(Gateway& gateway, const std::string& model_id,
                        const std::vector<LabeledExample>& labeled);

// Run-artifact serialization (one JSON object per line / pretty JSON).
std::string concept_to_json_line(const GeneratedConcept& generated);
GeneratedConcept concept_from_json_line(std::string_view line);
std::vector<GeneratedConcept> read_concepts(const std::string& path);
void write_concepts(const std::vector<GeneratedConcept>& concepts, const std::string& path);

std::string evaluation_to_json_line(const ConceptEvaluation& evaluation);
ConceptEvaluation evaluation_from_json_line(std::string_view line);
std::vector<ConceptEvaluation> read_evaluations(const std::string& path);
void write_evaluations(const std::vector<ConceptEvaluation>& evaluations, const std::string& path);

std::string pass_rates_to_json(const PassRateTable& table);
/// Plain-text table in the Table-4 layout; N/A where a column does not apply.
std::string render_pass_rates(const PassRateTable& table);

} // namespace bidforge
