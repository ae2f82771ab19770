// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/corpus.hpp"
#include "bidforge/domain.hpp"
#include "bidforge/llm_gateway.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bidforge {

inline constexpr int kDefaultEpochs = 4;
inline constexpr std::size_t kNonBioExemplarCount = 5;

struct TrainingExample {
    std::string prompt;
    std::string completion;

    bool operator==(const TrainingExample&) const = default;
};

struct LabeledExample {
    std::string record_id;
    EvaluatorPair pair = EvaluatorPair::BioInnovation;
    std::string text;
    Label label = Label::Related;

    bool operator==(const LabeledExample&) const = default;
};

struct SkipReport {
    std::string record_id;
    std::string reason;
};

struct SamplingParams {
    double temperature = 0.8;
    int max_tokens = 400;
};

/// The prompt templates shared by dataset compilation and generation time:
///   Type1 / NegGen  "Applications: a, b"
///   Type2           "Benefits: x, y\nApplications: a, b"
///   Type3           "Challenge: <paragraph>"
/// each followed by kPromptSeparator. Throws MissingField when the fields
/// the type needs are empty.
std::string render_prompt(const std::vector<std::string>& applications,
                          const std::vector<std::string>& benefits, const std::string& challenge,
                          GeneratorType type);

/// Completion: " [Bio]..[/Bio][Inno]..[/Inno]" (or just the [Inno] block for
/// NegGen) followed by kStopToken.
TrainingExample render_generator_example(const InnovationRecord& record, GeneratorType type);

struct GeneratorDataset {
    std::vector<TrainingExample> examples;
    std::vector<SkipReport> skipped;
};

/// One example per qualifying record in corpus order; others are skipped
/// with a reason. Throws EmptyOutput if nothing qualifies.
GeneratorDataset build_generator_dataset(const Corpus& corpus, GeneratorType type);

/// Domain A text for a pair: joined benefits, the challenge, or the
/// biomimicry story. Empty when the record lacks it.
std::string domain_a_text(const InnovationRecord& record, EvaluatorPair pair);

/// mark(a, A-tag) + mark(b, "Inno").
std::string render_pair_text(EvaluatorPair pair, std::string_view domain_a,
                             std::string_view domain_b);

struct EvaluatorDataset {
    std::vector<LabeledExample> examples;
    std::vector<SkipReport> skipped;
};

/// For every qualifying record emits a Related example (its own A and B)
/// followed by an Unrelated one (its A with a seeded pick from `negatives`).
/// Negatives are drawn without replacement while the pool lasts; a pick equal
/// to the record's own innovation is skipped. With `allow_replacement`
/// a short pool is sampled with replacement instead of failing.
EvaluatorDataset build_evaluator_dataset(const Corpus& corpus, EvaluatorPair pair,
                                         const std::vector<std::string>& negatives,
                                         std::uint64_t seed, bool allow_replacement = true);

/// Classifier fine-tune line: prompt = text + separator, completion = label token.
TrainingExample to_training_example(const LabeledExample& example);

/// Request for the NegGen model: applications only, so the result shares the
/// topic but ignores the problem.
CompletionRequest negative_solution_request(const std::string& neggen_model,
                                            const std::vector<std::string>& applications,
                                            const SamplingParams& params = {});

/// Few-shot request over exactly five biology-free innovation exemplars.
CompletionRequest negative_nonbio_request(const std::string& base_model,
                                          const std::vector<std::string>& exemplars,
                                          const SamplingParams& params = {});

/// Runs negative_solution_request through the gateway and returns the
/// [Inno] block content.
std::string generate_negative_solution(Gateway& gateway, const CompletionRequest& request);

/// Runs a few-shot request and returns the normalized continuation.
std::string generate_negative_nonbio(Gateway& gateway, const CompletionRequest& request);

/// max(1, round(0.002 * n)).
int compute_batch_size(std::size_t n_examples);

std::string serialize_training_examples(const std::vector<TrainingExample>& examples);
void serialize_training_file(const std::vector<TrainingExample>& examples, const std::string& path);
std::vector<TrainingExample> parse_training_examples(std::string_view contents);
std::vector<TrainingExample> read_training_file(const std::string& path);

/// Negatives file: one {"source_id": ..., "text": ...} object per line.
struct NegativeSample {
    std::string source_id;
    std::string text;
};
void write_negatives(const std::vector<NegativeSample>& negatives, const std::string& path);
std::vector<NegativeSample> read_negatives(const std::string& path);

/// Reads five exemplars separated by blank lines.
std::vector<std::string> read_exemplars(const std::string& path);

} // namespace bidforge
