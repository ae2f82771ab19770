// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/corpus.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

namespace bidforge {

using detail::ojson;

std::string normalize_paragraph(std::string_view text) {
    return normalize_whitespace(text);
}

std::string normalize_keyword(std::string_view keyword) {
    return to_lower(normalize_whitespace(keyword));
}

namespace {

std::vector<std::string> normalize_keywords(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& k : in) {
        auto n = normalize_keyword(k);
        if (!n.empty() && !seen.insert(n).second) continue;
        out.push_back(std::move(n));
    }
    return out;
}

void check_keywords(const std::vector<std::string>& keywords, const std::string& field,
                    std::vector<std::string>& out) {
    std::set<std::string> seen;
    bool reported_dup = false;
    bool reported_empty = false;
    for (const auto& k : keywords) {
        const auto n = normalize_keyword(k);
        if (n.empty()) {
            if (!reported_empty) out.push_back(field + ": empty keyword");
            reported_empty = true;
            continue;
        }
        if (!seen.insert(n).second && !reported_dup) {
            out.push_back(field + ": duplicate keyword");
            reported_dup = true;
        }
    }
}

std::vector<std::string> string_array(const ojson& j, const char* key, std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_array()) {
        throw Error(Errc::ParseError, std::string("line ") + std::to_string(line) +
                                          ": missing or non-array key '" + key + "'",
                    key, line);
    }
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw Error(Errc::ParseError, std::string("line ") + std::to_string(line) +
                                              ": non-string entry in '" + key + "'",
                        key, line);
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::string string_field(const ojson& j, const char* key, std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw Error(Errc::ParseError, std::string("line ") + std::to_string(line) +
                                          ": missing or non-string key '" + key + "'",
                    key, line);
    }
    return it->get<std::string>();
}

std::size_t word_count(const std::string& s) {
    if (s.empty()) return 0;
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), ' ')) + 1;
}

FieldWordStats field_stats(const Corpus& corpus, std::string InnovationRecord::*field) {
    FieldWordStats st;
    std::size_t total = 0;
    for (const auto& r : corpus.records) {
        const auto w = word_count(normalize_paragraph(r.*field));
        total += w;
        st.max_words = std::max(st.max_words, w);
    }
    st.mean_words = static_cast<double>(total) / static_cast<double>(corpus.size());
    return st;
}

} // namespace

InnovationRecord normalize_record(InnovationRecord r) {
    r.id = trim(r.id);
    r.benefits = normalize_keywords(r.benefits);
    r.applications = normalize_keywords(r.applications);
    r.challenge = normalize_paragraph(r.challenge);
    r.innovation = normalize_paragraph(r.innovation);
    r.biomimicry = normalize_paragraph(r.biomimicry);
    return r;
}

std::vector<std::string> validate_record(const InnovationRecord& record) {
    std::vector<std::string> v;
    if (trim(record.id).empty()) v.push_back("id: must be non-empty");
    check_keywords(record.benefits, "benefits", v);
    if (record.applications.empty()) v.push_back("applications: must be non-empty");
    check_keywords(record.applications, "applications", v);
    if (normalize_paragraph(record.challenge).empty()) v.push_back("challenge: must be non-empty");
    if (normalize_paragraph(record.innovation).empty()) v.push_back("innovation: must be non-empty");
    if (normalize_paragraph(record.biomimicry).empty()) v.push_back("biomimicry: must be non-empty");
    return v;
}

Corpus parse_corpus(std::string_view text, const std::string& source) {
    Corpus corpus;
    corpus.source_path = source;
    std::unordered_set<std::string> ids;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        ojson j;
        try {
            j = ojson::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::ParseError,
                        source + ":" + std::to_string(line_no) + ": " + e.what(), source, line_no);
        }
        if (!j.is_object()) {
            throw Error(Errc::ParseError, source + ":" + std::to_string(line_no) + ": not an object",
                        source, line_no);
        }
        InnovationRecord r;
        r.id = string_field(j, "id", line_no);
        r.benefits = string_array(j, "benefits", line_no);
        r.applications = string_array(j, "applications", line_no);
        r.challenge = string_field(j, "challenge", line_no);
        r.innovation = string_field(j, "innovation", line_no);
        r.biomimicry = string_field(j, "biomimicry", line_no);
        r = normalize_record(std::move(r));
        const auto violations = validate_record(r);
        if (!violations.empty()) {
            const auto& first = violations.front();
            throw Error(Errc::ValidationError,
                        "record '" + r.id + "' (line " + std::to_string(line_no) + "): " + first,
                        r.id, line_no);
        }
        if (!ids.insert(r.id).second) {
            throw Error(Errc::ValidationError,
                        "record '" + r.id + "' (line " + std::to_string(line_no) +
                            "): id: duplicate id",
                        r.id, line_no);
        }
        corpus.records.push_back(std::move(r));
    });
    if (corpus.empty()) throw Error(Errc::EmptyCorpus, "no records in " + source, source);
    return corpus;
}

Corpus load_corpus(const std::string& path) {
    return parse_corpus(read_file(path), path);
}

std::string serialize_record(const InnovationRecord& r) {
    ojson j;
    j["id"] = r.id;
    j["benefits"] = r.benefits;
    j["applications"] = r.applications;
    j["challenge"] = r.challenge;
    j["innovation"] = r.innovation;
    j["biomimicry"] = r.biomimicry;
    return detail::dump_line(j);
}

std::string serialize_corpus(const Corpus& corpus) {
    std::string out;
    for (const auto& r : corpus.records) out += serialize_record(r);
    return out;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    write_file(path, serialize_corpus(corpus));
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, const SplitSpec& spec) {
    if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot split an empty corpus");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0)) {
        throw Error(Errc::InvalidArgument, "train_fraction must lie in (0, 1]");
    }
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(spec.seed);
    seeded_shuffle(order, rng);

    const auto n_train =
        static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(corpus.size())));
    Corpus train{{}, corpus.source_path};
    Corpus validation{{}, corpus.source_path};
    for (std::size_t k = 0; k < order.size(); ++k) {
        (k < n_train ? train : validation).records.push_back(corpus.records[order[k]]);
    }
    return {std::move(train), std::move(validation)};
}

CorpusStats corpus_stats(const Corpus& corpus, std::size_t top_k) {
    if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot summarize an empty corpus");
    CorpusStats s;
    s.record_count = corpus.size();
    s.challenge = field_stats(corpus, &InnovationRecord::challenge);
    s.innovation = field_stats(corpus, &InnovationRecord::innovation);
    s.biomimicry = field_stats(corpus, &InnovationRecord::biomimicry);

    std::map<std::string, std::size_t> freq;
    for (const auto& r : corpus.records) {
        for (const auto& a : r.applications) ++freq[normalize_keyword(a)];
    }
    s.top_applications.assign(freq.begin(), freq.end());
    std::stable_sort(s.top_applications.begin(), s.top_applications.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (s.top_applications.size() > top_k) s.top_applications.resize(top_k);
    return s;
}

std::string stats_to_json(const CorpusStats& s) {
    auto field = [](const FieldWordStats& f) {
        ojson j;
        j["mean_words"] = f.mean_words;
        j["max_words"] = f.max_words;
        return j;
    };
    ojson j;
    j["record_count"] = s.record_count;
    j["challenge"] = field(s.challenge);
    j["innovation"] = field(s.innovation);
    j["biomimicry"] = field(s.biomimicry);
    ojson top = ojson::array();
    for (const auto& [k, c] : s.top_applications) top.push_back(ojson{{"keyword", k}, {"count", c}});
    j["top_applications"] = top;
    return j.dump(2) + "\n";
}

} // namespace bidforge
