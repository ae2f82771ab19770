// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/concept_engine.hpp"

#include "bidforge/error.hpp"
#include "bidforge/markup.hpp"
#include "bidforge/parallel.hpp"
#include "bidforge/text.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <sstream>

namespace bidforge {

using detail::ojson;

int RateCell::percent() const {
    if (total == 0) return 0;
    return static_cast<int>((200 * passing + total) / (2 * total));
}

std::vector<EvaluatorPair> applicable_pairs(GeneratorType type) {
    switch (type) {
    case GeneratorType::Type1: return {EvaluatorPair::BioInnovation};
    case GeneratorType::Type2:
        return {EvaluatorPair::BenefitsInnovation, EvaluatorPair::BioInnovation};
    case GeneratorType::Type3:
        return {EvaluatorPair::ChallengeInnovation, EvaluatorPair::BioInnovation};
    case GeneratorType::NegGen: break;
    }
    throw Error(Errc::InvalidArgument, "NegGen outputs are not evaluated as concepts");
}

std::optional<EvaluatorPair> problem_pair(GeneratorType type) {
    if (type == GeneratorType::Type2) return EvaluatorPair::BenefitsInnovation;
    if (type == GeneratorType::Type3) return EvaluatorPair::ChallengeInnovation;
    return std::nullopt;
}

std::string assemble_prompt(const ProblemSpec& spec, GeneratorType type) {
    if (type == GeneratorType::NegGen) {
        throw Error(Errc::InvalidArgument, "concept generation needs Type-1, Type-2 or Type-3");
    }
    std::vector<std::string> apps;
    std::vector<std::string> bens;
    for (const auto& a : spec.applications) apps.push_back(normalize_keyword(a));
    for (const auto& b : spec.benefits) bens.push_back(normalize_keyword(b));
    return render_prompt(apps, bens, spec.challenge, type);
}

std::pair<std::string, std::string> parse_generation(const std::string& raw) {
    const auto blocks = parse_marked(raw);
    const std::string bio_tag(kBioTag);
    const std::string inno_tag(kInnoTag);
    for (const auto& [tag, _] : blocks) {
        if (tag != bio_tag && tag != inno_tag) {
            throw Error(Errc::MalformedMarkup, "unexpected block [" + tag + "]", tag);
        }
    }
    if (!blocks.contains(bio_tag)) throw Error(Errc::MalformedMarkup, "missing [Bio] block", bio_tag);
    if (!blocks.contains(inno_tag)) throw Error(Errc::MalformedMarkup, "missing [Inno] block", inno_tag);
    auto bio = trim(blocks.at(bio_tag));
    auto inno = trim(blocks.at(inno_tag));
    if (bio.empty()) throw Error(Errc::EmptyBlock, "empty [Bio] block", bio_tag);
    if (inno.empty()) throw Error(Errc::EmptyBlock, "empty [Inno] block", inno_tag);
    return {std::move(bio), std::move(inno)};
}

GenerationResult generate_concepts(Gateway& gateway, const ProblemSpec& spec, GeneratorType type,
                                   std::size_t n, const GenerationParams& params) {
    if (n == 0) throw Error(Errc::InvalidArgument, "number of concepts must be positive");
    if (params.model_id.empty()) {
        throw Error(Errc::InvalidArgument,
                    "no generator model configured for " + std::string(display_name(type)));
    }
    if (params.retry_cap < 0) throw Error(Errc::InvalidArgument, "retry cap must be >= 0");
    const auto prompt = assemble_prompt(spec, type);
    const auto attempts = static_cast<std::uint64_t>(params.retry_cap) + 1;

    std::vector<std::optional<GeneratedConcept>> slots(n);
    std::vector<std::vector<GenerationSkip>> slot_skips(n);

    parallel_for(n, params.workers, [&](std::size_t slot) {
        for (std::uint64_t attempt = 0; attempt < attempts; ++attempt) {
            CompletionRequest req;
            req.model_id = params.model_id;
            req.prompt = prompt;
            req.max_tokens = params.sampling.max_tokens;
            req.temperature = params.sampling.temperature;
            req.stop = {std::string(kStopToken)};
            req.n = 1;
            req.nonce = slot * attempts + attempt;
            auto raw = gateway.complete(req).front();
            try {
                auto [bio, inno] = parse_generation(raw);
                GeneratedConcept c;
                c.concept_id = params.run_id + "-" + std::to_string(slot);
                c.gtype = type;
                c.spec = spec;
                c.biomimicry = std::move(bio);
                c.innovation = std::move(inno);
                c.raw = std::move(raw);
                c.model_id = params.model_id;
                slots[slot] = std::move(c);
                return;
            } catch (const Error& e) {
                slot_skips[slot].push_back({slot, static_cast<int>(attempt), e.what()});
            }
        }
    });

    GenerationResult result;
    for (std::size_t s = 0; s < n; ++s) {
        if (slots[s]) result.concepts.push_back(std::move(*slots[s]));
        for (auto& k : slot_skips[s]) result.skipped.push_back(std::move(k));
    }
    if (result.concepts.empty()) {
        std::string reasons;
        for (const auto& k : result.skipped) {
            reasons += "\n  slot " + std::to_string(k.slot) + " attempt " + std::to_string(k.attempt) +
                       ": " + k.reason;
        }
        throw Error(Errc::AllMalformed, "every generation attempt was malformed:" + reasons);
    }
    return result;
}

void apply_threshold(ConceptEvaluation& evaluation, double threshold) {
    if (!(threshold >= 0.5 && threshold < 1.0)) {
        throw Error(Errc::InvalidArgument, "threshold must lie in [0.5, 1)");
    }
    evaluation.threshold = threshold;
    evaluation.passed.clear();
    bool all = !evaluation.verdicts.empty();
    for (const auto& [pair, v] : evaluation.verdicts) {
        const bool pass = v.label == Label::Related && v.confidence >= threshold;
        evaluation.passed[pair] = pass;
        all = all && pass;
    }
    evaluation.overall = all;
}

ConceptEvaluation evaluate_concept(Gateway& gateway, const GeneratedConcept& generated,
                                   const std::map<EvaluatorPair, std::string>& evaluator_models,
                                   double threshold) {
    if (!(threshold >= 0.5 && threshold < 1.0)) {
        throw Error(Errc::InvalidArgument, "threshold must lie in [0.5, 1)");
    }
    const auto pairs = applicable_pairs(generated.gtype);
    for (const auto p : pairs) {
        const auto it = evaluator_models.find(p);
        if (it == evaluator_models.end() || it->second.empty()) {
            throw Error(Errc::MissingEvaluatorModel,
                        "no evaluator model configured for " + std::string(to_string(p)),
                        std::string(to_string(p)));
        }
    }
    ConceptEvaluation ev;
    ev.concept_id = generated.concept_id;
    ev.gtype = generated.gtype;
    for (const auto p : pairs) {
        std::string a;
        switch (p) {
        case EvaluatorPair::BenefitsInnovation: {
            std::vector<std::string> bens;
            for (const auto& b : generated.spec.benefits) bens.push_back(normalize_keyword(b));
            a = join(bens, ", ");
            break;
        }
        case EvaluatorPair::ChallengeInnovation: a = normalize_paragraph(generated.spec.challenge); break;
        case EvaluatorPair::BioInnovation: a = generated.biomimicry; break;
        }
        if (trim(a).empty()) {
            throw Error(Errc::MissingField,
                        "concept '" + generated.concept_id + "' has no domain A for " +
                            std::string(to_string(p)),
                        std::string(to_string(p)));
        }
        const auto text = render_pair_text(p, a, generated.innovation);
        ev.verdicts[p] = gateway.classify(evaluator_models.at(p), text, p);
    }
    apply_threshold(ev, threshold);
    return ev;
}

std::vector<ConceptEvaluation> evaluate_concepts(
    Gateway& gateway, const std::vector<GeneratedConcept>& concepts,
    const std::map<EvaluatorPair, std::string>& evaluator_models, double threshold,
    std::size_t workers) {
    std::vector<ConceptEvaluation> out(concepts.size());
    parallel_for(concepts.size(), workers, [&](std::size_t i) {
        out[i] = evaluate_concept(gateway, concepts[i], evaluator_models, threshold);
    });
    return out;
}

PassRateRow aggregate(const std::vector<ConceptEvaluation>& evaluations) {
    if (evaluations.empty()) throw Error(Errc::EmptyInput, "nothing to aggregate");
    PassRateRow row;
    row.gtype = evaluations.front().gtype;
    const auto pp = problem_pair(row.gtype);
    if (pp) row.problem_solution = RateCell{};
    for (const auto& ev : evaluations) {
        if (ev.gtype != row.gtype) {
            throw Error(Errc::MixedTypes, "evaluations mix " + std::string(display_name(row.gtype)) +
                                              " and " + std::string(display_name(ev.gtype)));
        }
        auto passed = [&](EvaluatorPair p) {
            const auto it = ev.passed.find(p);
            return it != ev.passed.end() && it->second;
        };
        if (pp) {
            ++row.problem_solution->total;
            row.problem_solution->passing += passed(*pp) ? 1 : 0;
        }
        ++row.nature_solution.total;
        row.nature_solution.passing += passed(EvaluatorPair::BioInnovation) ? 1 : 0;
        ++row.overall.total;
        row.overall.passing += ev.overall ? 1 : 0;
    }
    return row;
}

PassRateTable aggregate_by_type(const std::vector<ConceptEvaluation>& evaluations) {
    if (evaluations.empty()) throw Error(Errc::EmptyInput, "nothing to aggregate");
    std::map<GeneratorType, std::vector<ConceptEvaluation>> groups;
    for (const auto& ev : evaluations) groups[ev.gtype].push_back(ev);
    PassRateTable table;
    for (const auto& [type, group] : groups) table.rows.push_back(aggregate(group));
    return table;
}

double measure_accuracy(Gateway& gateway, const std::string& model_id,
                        const std::vector<LabeledExample>& labeled) {
    if (labeled.empty()) throw Error(Errc::EmptyInput, "no labeled examples");
    std::size_t correct = 0;
    for (const auto& ex : labeled) {
        const auto v = gateway.classify(model_id, ex.text, ex.pair);
        correct += v.label == ex.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(labeled.size());
}

// --- serialization --------------------------------------------------------

namespace {

ojson spec_json(const ProblemSpec& s) {
    ojson j;
    j["applications"] = s.applications;
    j["benefits"] = s.benefits;
    j["challenge"] = s.challenge;
    return j;
}

ProblemSpec spec_from_json(const ojson& j) {
    ProblemSpec s;
    s.applications = j.at("applications").get<std::vector<std::string>>();
    s.benefits = j.value("benefits", std::vector<std::string>{});
    s.challenge = j.value("challenge", std::string{});
    return s;
}

template <typename T, typename Parse>
std::vector<T> read_lines(const std::string& path, Parse parse) {
    const auto contents = read_file(path);
    std::vector<T> out;
    detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
        try {
            out.push_back(parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": " + e.what(), path,
                        line_no);
        } catch (const Error& e) {
            throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": " + e.what(), path,
                        line_no);
        }
    });
    return out;
}

ojson cell_json(const RateCell& c) {
    ojson j;
    j["passing"] = c.passing;
    j["total"] = c.total;
    j["percent"] = c.percent();
    return j;
}

} // namespace

std::string concept_to_json_line(const GeneratedConcept& c) {
    ojson j;
    j["concept_id"] = c.concept_id;
    j["gtype"] = std::string(to_string(c.gtype));
    j["spec"] = spec_json(c.spec);
    j["biomimicry"] = c.biomimicry;
    j["innovation"] = c.innovation;
    j["raw"] = c.raw;
    j["model_id"] = c.model_id;
    return detail::dump_line(j);
}

GeneratedConcept concept_from_json_line(std::string_view line) {
    const auto j = ojson::parse(line);
    GeneratedConcept c;
    c.concept_id = j.at("concept_id").get<std::string>();
    c.gtype = parse_generator_type(j.at("gtype").get<std::string>());
    c.spec = spec_from_json(j.at("spec"));
    c.biomimicry = j.at("biomimicry").get<std::string>();
    c.innovation = j.at("innovation").get<std::string>();
    c.raw = j.value("raw", std::string{});
    c.model_id = j.value("model_id", std::string{});
    return c;
}

std::vector<GeneratedConcept> read_concepts(const std::string& path) {
    return read_lines<GeneratedConcept>(path, concept_from_json_line);
}

void write_concepts(const std::vector<GeneratedConcept>& concepts, const std::string& path) {
    std::string out;
    for (const auto& c : concepts) out += concept_to_json_line(c);
    write_file(path, out);
}

std::string evaluation_to_json_line(const ConceptEvaluation& ev) {
    ojson j;
    j["concept_id"] = ev.concept_id;
    j["gtype"] = std::string(to_string(ev.gtype));
    j["threshold"] = ev.threshold;
    ojson verdicts = ojson::object();
    for (const auto& [pair, v] : ev.verdicts) {
        ojson vj;
        vj["label"] = std::string(to_string(v.label));
        vj["confidence"] = v.confidence;
        verdicts[std::string(to_string(pair))] = vj;
    }
    j["verdicts"] = verdicts;
    ojson passed = ojson::object();
    for (const auto& [pair, p] : ev.passed) passed[std::string(to_string(pair))] = p;
    j["passed"] = passed;
    j["overall"] = ev.overall;
    return detail::dump_line(j);
}

ConceptEvaluation evaluation_from_json_line(std::string_view line) {
    const auto j = ojson::parse(line);
    ConceptEvaluation ev;
    ev.concept_id = j.at("concept_id").get<std::string>();
    ev.gtype = parse_generator_type(j.at("gtype").get<std::string>());
    ev.threshold = j.value("threshold", kDefaultThreshold);
    for (const auto& [key, vj] : j.at("verdicts").items()) {
        Verdict v;
        v.pair = parse_evaluator_pair(key);
        v.label = vj.at("label").get<std::string>() == "related" ? Label::Related : Label::Unrelated;
        v.confidence = vj.at("confidence").get<double>();
        ev.verdicts[v.pair] = v;
    }
    for (const auto& [key, pj] : j.at("passed").items()) {
        ev.passed[parse_evaluator_pair(key)] = pj.get<bool>();
    }
    ev.overall = j.at("overall").get<bool>();
    return ev;
}

std::vector<ConceptEvaluation> read_evaluations(const std::string& path) {
    return read_lines<ConceptEvaluation>(path, evaluation_from_json_line);
}

void write_evaluations(const std::vector<ConceptEvaluation>& evaluations, const std::string& path) {
    std::string out;
    for (const auto& e : evaluations) out += evaluation_to_json_line(e);
    write_file(path, out);
}

std::string pass_rates_to_json(const PassRateTable& table) {
    ojson j = ojson::object();
    for (const auto& row : table.rows) {
        ojson r;
        if (row.problem_solution) r["problem_solution"] = cell_json(*row.problem_solution);
        r["nature_solution"] = cell_json(row.nature_solution);
        r["overall"] = cell_json(row.overall);
        j[std::string(to_string(row.gtype))] = r;
    }
    return j.dump(2) + "\n";
}

std::string render_pass_rates(const PassRateTable& table) {
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    auto cell = [](const RateCell& c) {
        return std::to_string(c.percent()) + "% (" + std::to_string(c.passing) + "/" +
               std::to_string(c.total) + ")";
    };
    constexpr std::size_t label_w = 18;
    constexpr std::size_t col_w = 16;
    std::ostringstream out;
    out << pad("", label_w);
    for (const auto& row : table.rows) out << pad(std::string(display_name(row.gtype)), col_w);
    out << "\n";
    const bool any_problem = std::any_of(table.rows.begin(), table.rows.end(),
                                         [](const auto& r) { return r.problem_solution.has_value(); });
    if (any_problem) {
        out << pad("Problem-Solution", label_w);
        for (const auto& row : table.rows) {
            out << pad(row.problem_solution ? cell(*row.problem_solution) : "N/A", col_w);
        }
        out << "\n";
    }
    out << pad("Nature-Solution", label_w);
    for (const auto& row : table.rows) out << pad(cell(row.nature_solution), col_w);
    out << "\n" << pad("Overall", label_w);
    for (const auto& row : table.rows) out << pad(cell(row.overall), col_w);
    out << "\n";
    auto text = out.str();
    // strip trailing spaces per line
    std::string cleaned;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        while (!line.empty() && line.back() == ' ') line.pop_back();
        cleaned += line + "\n";
    }
    return cleaned;
}

} // namespace bidforge
