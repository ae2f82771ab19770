// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/prompt_forge.hpp"

#include "bidforge/error.hpp"
#include "bidforge/markup.hpp"
#include "bidforge/text.hpp"
#include "json_util.hpp"

#include <cmath>
#include <random>

namespace bidforge {

using detail::ojson;

namespace {

[[noreturn]] void missing_field(GeneratorType type, std::string_view field) {
    throw Error(Errc::MissingField,
                std::string(display_name(type)) + " requires non-empty " + std::string(field),
                std::string(field));
}

std::string keyword_list(const std::vector<std::string>& keywords) {
    return join(keywords, ", ");
}

bool has_keywords(const std::vector<std::string>& v) {
    for (const auto& k : v) {
        if (!trim(k).empty()) return true;
    }
    return false;
}

std::string required_missing(const InnovationRecord& r, GeneratorType type) {
    if (!has_keywords(r.applications)) return "applications";
    if (type == GeneratorType::Type2 && !has_keywords(r.benefits)) return "benefits";
    if (type == GeneratorType::Type3 && trim(r.challenge).empty()) return "challenge";
    if (trim(r.innovation).empty()) return "innovation";
    if (type != GeneratorType::NegGen && trim(r.biomimicry).empty()) return "biomimicry";
    return {};
}

} // namespace

std::string render_prompt(const std::vector<std::string>& applications,
                          const std::vector<std::string>& benefits, const std::string& challenge,
                          GeneratorType type) {
    std::string p;
    switch (type) {
    case GeneratorType::Type1:
    case GeneratorType::NegGen:
        if (!has_keywords(applications)) missing_field(type, "applications");
        p = "Applications: " + keyword_list(applications);
        break;
    case GeneratorType::Type2:
        if (!has_keywords(benefits)) missing_field(type, "benefits");
        if (!has_keywords(applications)) missing_field(type, "applications");
        p = "Benefits: " + keyword_list(benefits) + "\nApplications: " + keyword_list(applications);
        break;
    case GeneratorType::Type3: {
        const auto c = normalize_whitespace(challenge);
        if (c.empty()) missing_field(type, "challenge");
        p = "Challenge: " + c;
        break;
    }
    }
    p += kPromptSeparator;
    return p;
}

TrainingExample render_generator_example(const InnovationRecord& record, GeneratorType type) {
    TrainingExample ex;
    ex.prompt = render_prompt(record.applications, record.benefits, record.challenge, type);
    if (trim(record.innovation).empty()) missing_field(type, "innovation");
    std::string body;
    if (type != GeneratorType::NegGen) {
        if (trim(record.biomimicry).empty()) missing_field(type, "biomimicry");
        body = mark(record.biomimicry, kBioTag);
    }
    body += mark(record.innovation, kInnoTag);
    ex.completion = " " + body + std::string(kStopToken);
    return ex;
}

GeneratorDataset build_generator_dataset(const Corpus& corpus, GeneratorType type) {
    GeneratorDataset ds;
    for (const auto& r : corpus.records) {
        if (const auto missing = required_missing(r, type); !missing.empty()) {
            ds.skipped.push_back({r.id, "missing " + missing});
            continue;
        }
        ds.examples.push_back(render_generator_example(r, type));
    }
    if (ds.examples.empty()) {
        throw Error(Errc::EmptyOutput, "no record qualifies for " + std::string(display_name(type)));
    }
    return ds;
}

std::string domain_a_text(const InnovationRecord& record, EvaluatorPair pair) {
    switch (pair) {
    case EvaluatorPair::BenefitsInnovation: {
        std::vector<std::string> kept;
        for (const auto& b : record.benefits) {
            if (!trim(b).empty()) kept.push_back(b);
        }
        return keyword_list(kept);
    }
    case EvaluatorPair::ChallengeInnovation: return record.challenge;
    case EvaluatorPair::BioInnovation: return record.biomimicry;
    }
    return {};
}

std::string render_pair_text(EvaluatorPair pair, std::string_view domain_a,
                             std::string_view domain_b) {
    return mark(domain_a, domain_a_tag(pair)) + mark(domain_b, kInnoTag);
}

EvaluatorDataset build_evaluator_dataset(const Corpus& corpus, EvaluatorPair pair,
                                         const std::vector<std::string>& negatives,
                                         std::uint64_t seed, bool allow_replacement) {
    if (negatives.empty()) {
        throw Error(Errc::InsufficientNegatives, "negative pool is empty");
    }
    EvaluatorDataset ds;
    std::vector<const InnovationRecord*> qualifying;
    for (const auto& r : corpus.records) {
        const auto a = domain_a_text(r, pair);
        if (trim(a).empty()) {
            ds.skipped.push_back({r.id, "missing " + std::string(to_string(pair)) + " domain A"});
        } else if (trim(r.innovation).empty()) {
            ds.skipped.push_back({r.id, "missing innovation"});
        } else {
            qualifying.push_back(&r);
        }
    }
    if (qualifying.empty()) {
        throw Error(Errc::MissingField, "no record has the fields for " + std::string(to_string(pair)));
    }
    if (!allow_replacement && negatives.size() < qualifying.size()) {
        throw Error(Errc::InsufficientNegatives,
                    std::to_string(negatives.size()) + " negatives for " +
                        std::to_string(qualifying.size()) + " records");
    }

    std::vector<std::string> pool;
    pool.reserve(negatives.size());
    for (const auto& n : negatives) pool.push_back(normalize_paragraph(n));

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    seeded_shuffle(order, rng);
    std::vector<bool> used(pool.size(), false);
    std::size_t cursor = 0;

    auto draw = [&](const InnovationRecord& r) -> const std::string& {
        const auto own = normalize_paragraph(r.innovation);
        // Without replacement: first unused pick in shuffled order.
        for (std::size_t k = cursor; k < order.size(); ++k) {
            const auto idx = order[k];
            if (used[idx] || pool[idx] == own) continue;
            used[idx] = true;
            if (k == cursor) ++cursor;
            while (cursor < order.size() && used[order[cursor]]) ++cursor;
            return pool[idx];
        }
        if (!allow_replacement) {
            throw Error(Errc::InsufficientNegatives,
                        "negative pool exhausted at record '" + r.id + "'", r.id);
        }
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (pool[i] != own) candidates.push_back(i);
        }
        if (candidates.empty()) {
            throw Error(Errc::InsufficientNegatives,
                        "every negative equals the innovation of record '" + r.id + "'", r.id);
        }
        return pool[candidates[uniform_index(rng, candidates.size())]];
    };

    for (const auto* r : qualifying) {
        const auto a = domain_a_text(*r, pair);
        ds.examples.push_back({r->id, pair, render_pair_text(pair, a, r->innovation), Label::Related});
        const auto& neg = draw(*r);
        ds.examples.push_back({r->id, pair, render_pair_text(pair, a, neg), Label::Unrelated});
    }
    return ds;
}

TrainingExample to_training_example(const LabeledExample& example) {
    return {example.text + std::string(kPromptSeparator), std::string(label_token(example.label))};
}

CompletionRequest negative_solution_request(const std::string& neggen_model,
                                            const std::vector<std::string>& applications,
                                            const SamplingParams& params) {
    if (neggen_model.empty()) throw Error(Errc::InvalidArgument, "NegGen model id is not configured");
    CompletionRequest req;
    req.model_id = neggen_model;
    req.prompt = render_prompt(applications, {}, {}, GeneratorType::NegGen);
    req.max_tokens = params.max_tokens;
    req.temperature = params.temperature;
    req.stop = {std::string(kStopToken)};
    return req;
}

CompletionRequest negative_nonbio_request(const std::string& base_model,
                                          const std::vector<std::string>& exemplars,
                                          const SamplingParams& params) {
    if (exemplars.size() != kNonBioExemplarCount) {
        throw Error(Errc::ExemplarCountError, "expected " + std::to_string(kNonBioExemplarCount) +
                                                  " exemplars, got " +
                                                  std::to_string(exemplars.size()));
    }
    CompletionRequest req;
    req.model_id = base_model;
    for (const auto& e : exemplars) {
        const auto text = normalize_paragraph(e);
        if (text.empty()) throw Error(Errc::ExemplarCountError, "blank exemplar");
        req.prompt += "Innovation: " + text + "\n###\n";
    }
    req.prompt += "Innovation:";
    req.max_tokens = params.max_tokens;
    req.temperature = params.temperature;
    req.stop = {"\n###"};
    return req;
}

std::string generate_negative_solution(Gateway& gateway, const CompletionRequest& request) {
    const auto texts = gateway.complete(request);
    const auto blocks = parse_marked(texts.front());
    const auto it = blocks.find(std::string(kInnoTag));
    if (it == blocks.end()) throw Error(Errc::MalformedMarkup, "NegGen output lacks an [Inno] block");
    auto text = normalize_paragraph(it->second);
    if (text.empty()) throw Error(Errc::EmptyBlock, "empty [Inno] block", std::string(kInnoTag));
    return text;
}

std::string generate_negative_nonbio(Gateway& gateway, const CompletionRequest& request) {
    auto text = normalize_paragraph(gateway.complete(request).front());
    if (text.empty()) throw Error(Errc::EmptyOutput, "few-shot negative came back empty");
    return text;
}

int compute_batch_size(std::size_t n_examples) {
    if (n_examples == 0) throw Error(Errc::InvalidArgument, "batch size needs at least one example");
    const auto b = std::lround(0.002 * static_cast<double>(n_examples));
    return static_cast<int>(std::max<long>(1, b));
}

std::string serialize_training_examples(const std::vector<TrainingExample>& examples) {
    std::string out;
    for (const auto& e : examples) {
        ojson j;
        j["prompt"] = e.prompt;
        j["completion"] = e.completion;
        out += detail::dump_line(j);
    }
    return out;
}

void serialize_training_file(const std::vector<TrainingExample>& examples, const std::string& path) {
    if (examples.empty()) throw Error(Errc::EmptyOutput, "refusing to write an empty training file");
    write_file(path, serialize_training_examples(examples));
}

std::vector<TrainingExample> parse_training_examples(std::string_view contents) {
    validate_training_file(contents);
    std::vector<TrainingExample> out;
    detail::for_each_line(contents, [&](std::size_t, std::string_view line) {
        const auto j = ojson::parse(line);
        out.push_back({j.at("prompt").get<std::string>(), j.at("completion").get<std::string>()});
    });
    return out;
}

std::vector<TrainingExample> read_training_file(const std::string& path) {
    return parse_training_examples(read_file(path));
}

void write_negatives(const std::vector<NegativeSample>& negatives, const std::string& path) {
    if (negatives.empty()) throw Error(Errc::EmptyOutput, "no negatives to write");
    std::string out;
    for (const auto& n : negatives) {
        ojson j;
        j["source_id"] = n.source_id;
        j["text"] = n.text;
        out += detail::dump_line(j);
    }
    write_file(path, out);
}

std::vector<NegativeSample> read_negatives(const std::string& path) {
    const auto contents = read_file(path);
    std::vector<NegativeSample> out;
    detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
        try {
            const auto j = ojson::parse(line);
            out.push_back({j.value("source_id", std::string{}), j.at("text").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": " + e.what(), path,
                        line_no);
        }
    });
    return out;
}

std::vector<std::string> read_exemplars(const std::string& path) {
    const auto contents = read_file(path);
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        auto t = normalize_paragraph(current);
        if (!t.empty()) out.push_back(std::move(t));
        current.clear();
    };
    std::size_t start = 0;
    while (start <= contents.size()) {
        auto end = contents.find('\n', start);
        if (end == std::string::npos) end = contents.size();
        const auto line = std::string_view(contents).substr(start, end - start);
        if (!line.empty() && line.front() == '#') {
            // comment
        } else if (trim(line).empty()) {
            flush();
        } else {
            current += ' ';
            current += line;
        }
        if (end == contents.size()) break;
        start = end + 1;
    }
    flush();
    return out;
}

} // namespace bidforge
