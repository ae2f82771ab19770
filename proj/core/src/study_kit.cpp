// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/study_kit.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <variant>

namespace bidforge {

using detail::ojson;

namespace {

constexpr std::array<std::string_view, 5> kFeasibilityRubric = {
    "The concept makes no sense from the engineering perspective.",
    "The concept makes little sense with today's technology, but could be possible in the future.",
    "The concept makes sense, but efforts are needed to work out a practical technical roadmap.",
    "The concept makes good sense, and a technical roadmap can be easily established to realize it.",
    "The concept makes perfect sense and there are existing tools, materials, or components to "
    "realize it.",
};

constexpr std::array<std::string_view, 5> kNoveltyRubric = {
    "Solution exists and is commonly seen in the target domain (target domain = the target "
    "product described in the concept)",
    "Solution exists but is uncommon in target domain.",
    "New features are proposed for target domain, but similar approaches or technology can be "
    "commonly seen in related industries (related industries = flying car, drone, automobile, "
    "robotics, etc.)",
    "New features are proposed for target domain, and similar approaches or technology can be "
    "rarely found in related industries.",
    "New features are proposed, and no similar approaches or technology can be found nowadays.",
};

constexpr std::string_view kRaterField = "rater:";
constexpr std::string_view kFeasibilityField = "feasibility:";
constexpr std::string_view kNoveltyField = "novelty:";

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

std::string group_of(GeneratorType t) { return std::string(to_string(t)); }

std::string item_label(std::size_t index, std::size_t total) {
    const auto digits = std::max<std::size_t>(2, std::to_string(total).size());
    auto n = std::to_string(index + 1);
    return "item-" + std::string(digits - std::min(digits, n.size()), '0') + n;
}

} // namespace

// ---- lexicon --------------------------------------------------------------

BioLexicon::BioLexicon(std::vector<Category> categories) : categories_(std::move(categories)) {
    std::set<std::string> names;
    std::map<std::string, std::string> owner;
    bool has_other = false;
    for (auto& cat : categories_) {
        cat.name = to_lower(trim(cat.name));
        if (cat.name.empty()) throw Error(Errc::ValidationError, "empty category name");
        if (!names.insert(cat.name).second) {
            throw Error(Errc::ValidationError, "duplicate category", cat.name);
        }
        if (cat.name == kOtherCategory) {
            has_other = true;
            if (!cat.keywords.empty()) {
                throw Error(Errc::ValidationError, "the other category takes no keywords", cat.name);
            }
        }
        for (auto& kw : cat.keywords) {
            auto tokens = tokenize(kw);
            if (tokens.size() != 1) {
                throw Error(Errc::ValidationError, "keyword must be a single word: '" + kw + "'", cat.name);
            }
            kw = tokens.front();
            auto [it, inserted] = owner.emplace(kw, cat.name);
            if (!inserted) {
                throw Error(Errc::ValidationError,
                            "keyword '" + kw + "' is in both " + it->second + " and " + cat.name, cat.name);
            }
        }
    }
    if (!has_other) categories_.push_back({std::string(kOtherCategory), {}});

    for (std::size_t c = 0; c < categories_.size(); ++c) {
        for (const auto& kw : categories_[c].keywords) {
            forms_.try_emplace(kw, c);
        }
    }
    for (std::size_t c = 0; c < categories_.size(); ++c) {
        for (const auto& kw : categories_[c].keywords) {
            forms_.try_emplace(kw + "s", c);
            forms_.try_emplace(kw + "es", c);
            if (kw.size() > 1 && kw.back() == 'y') forms_.try_emplace(kw.substr(0, kw.size() - 1) + "ies", c);
        }
    }
}

std::optional<std::size_t> BioLexicon::lookup(std::string_view token) const {
    auto it = forms_.find(token);
    if (it == forms_.end()) return std::nullopt;
    return it->second;
}

std::size_t BioLexicon::index_of(std::string_view name) const {
    for (std::size_t c = 0; c < categories_.size(); ++c) {
        if (categories_[c].name == name) return c;
    }
    throw Error(Errc::InvalidArgument, "unknown category", std::string(name));
}

BioLexicon parse_lexicon(std::string_view text) {
    std::vector<BioLexicon::Category> cats;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        auto line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) return;
        if (line.front() == '[' && line.back() == ']') {
            cats.push_back({line.substr(1, line.size() - 2), {}});
            return;
        }
        if (cats.empty()) throw Error(Errc::FormatError, "keyword before any [category] header", {}, line_no);
        cats.back().keywords.push_back(line);
    });
    return BioLexicon(std::move(cats));
}

BioLexicon load_lexicon(const std::string& path) { return parse_lexicon(read_file(path)); }

std::string categorize_bio(const GeneratedConcept& generated, const BioLexicon& lexicon) {
    const auto n = lexicon.categories().size();
    std::vector<std::size_t> hits(n, 0);
    std::vector<std::size_t> first(n, SIZE_MAX);
    const auto tokens = tokenize(generated.biomimicry);
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        if (auto c = lexicon.lookup(tokens[pos])) {
            ++hits[*c];
            first[*c] = std::min(first[*c], pos);
        }
    }
    std::size_t best = n;
    for (std::size_t c = 0; c < n; ++c) {
        if (hits[c] == 0) continue;
        if (best == n || hits[c] > hits[best] || (hits[c] == hits[best] && first[c] < first[best])) best = c;
    }
    return best == n ? std::string(kOtherCategory) : lexicon.categories()[best].name;
}

std::vector<CategoryShare> category_distribution(const std::vector<GeneratedConcept>& concepts,
                                                 const BioLexicon& lexicon) {
    if (concepts.empty()) throw Error(Errc::EmptyInput, "no concepts to categorize");
    std::vector<CategoryShare> shares;
    for (const auto& cat : lexicon.categories()) shares.push_back({cat.name, 0, 0.0});
    for (const auto& c : concepts) ++shares[lexicon.index_of(categorize_bio(c, lexicon))].count;
    for (auto& s : shares) {
        s.percent = 100.0 * static_cast<double>(s.count) / static_cast<double>(concepts.size());
    }
    return shares;
}

std::string render_category_distribution(const std::vector<CategoryShare>& shares) {
    std::ostringstream out;
    std::size_t total = 0;
    for (const auto& s : shares) total += s.count;
    char buf[96];
    for (const auto& s : shares) {
        std::snprintf(buf, sizeof buf, "%-12s %5zu %6.1f%%\n", s.category.c_str(), s.count, s.percent);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%-12s %5zu\n", "total", total);
    out << buf;
    return out.str();
}

// ---- survey ---------------------------------------------------------------

std::vector<BenchmarkConcept> read_benchmarks(const std::string& path) {
    std::vector<BenchmarkConcept> out;
    const auto text = read_file(path);
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        ojson j;
        try {
            j = ojson::parse(line);
            out.push_back({j.at("id").get<std::string>(), normalize_whitespace(j.at("biomimicry").get<std::string>()),
                           normalize_whitespace(j.at("innovation").get<std::string>())});
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, std::string("benchmark: ") + e.what(), path, line_no);
        }
    });
    return out;
}

const SurveyKeyEntry* SurveyKey::find(std::string_view label) const {
    for (const auto& e : items) {
        if (e.label == label) return &e;
    }
    return nullptr;
}

std::map<std::string, std::string> SurveyKey::concept_index() const {
    std::map<std::string, std::string> out;
    for (const auto& e : items) out[e.concept_id] = e.group;
    return out;
}

std::string serialize_survey_key(const SurveyKey& key) {
    ojson items = ojson::array();
    for (const auto& e : key.items) {
        ojson j;
        j["label"] = e.label;
        j["concept_id"] = e.concept_id;
        j["group"] = e.group;
        items.push_back(j);
    }
    ojson root;
    root["items"] = items;
    return root.dump(2) + "\n";
}

SurveyKey parse_survey_key(std::string_view text) {
    SurveyKey key;
    try {
        const auto root = ojson::parse(text);
        for (const auto& j : root.at("items")) {
            key.items.push_back({j.at("label").get<std::string>(), j.at("concept_id").get<std::string>(),
                                 j.at("group").get<std::string>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("survey key: ") + e.what());
    }
    return key;
}

SurveyKey read_survey_key(const std::string& path) { return parse_survey_key(read_file(path)); }

SurveyDocument build_survey(const std::vector<GeneratedConcept>& concepts,
                            const std::vector<BenchmarkConcept>& benchmarks) {
    if (concepts.empty()) throw Error(Errc::EmptyInput, "no concepts for the survey");
    struct Item {
        std::string id;
        std::string group;
        std::string biomimicry;
        std::string innovation;
    };
    const auto total = concepts.size() + benchmarks.size();
    std::vector<std::size_t> bench_at;
    for (std::size_t j = 0; j < benchmarks.size(); ++j) bench_at.push_back((j + 1) * total / (benchmarks.size() + 1));

    std::vector<Item> items;
    std::size_t next_concept = 0;
    std::size_t next_bench = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (next_bench < bench_at.size() && bench_at[next_bench] == i) {
            const auto& b = benchmarks[next_bench++];
            items.push_back({b.id, std::string(kBenchmarkGroup), b.biomimicry, b.innovation});
        } else {
            const auto& c = concepts[next_concept++];
            items.push_back({c.concept_id, group_of(c.gtype), c.biomimicry, c.innovation});
        }
    }

    SurveyDocument doc;
    std::ostringstream out;
    out << "# Concept rating survey\n"
           "#\n"
           "# Write your name after \"rater:\". For every item, write a whole number\n"
           "# from 1 to 5 after \"feasibility:\" and after \"novelty:\".\n"
           "#\n"
           "# Feasibility\n";
    for (std::size_t r = 0; r < kFeasibilityRubric.size(); ++r) out << "#   " << r + 1 << "  " << kFeasibilityRubric[r] << "\n";
    out << "#\n# Novelty\n";
    for (std::size_t r = 0; r < kNoveltyRubric.size(); ++r) out << "#   " << r + 1 << "  " << kNoveltyRubric[r] << "\n";
    out << "\n" << kRaterField << "\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto label = item_label(i, items.size());
        out << "\n[" << label << "]\n"
            << "biology: " << items[i].biomimicry << "\n"
            << "concept: " << items[i].innovation << "\n"
            << kFeasibilityField << "\n"
            << kNoveltyField << "\n";
        doc.key.items.push_back({label, items[i].id, items[i].group});
    }
    doc.text = out.str();
    return doc;
}

SurveyKey export_survey(const std::vector<GeneratedConcept>& concepts,
                        const std::vector<BenchmarkConcept>& benchmarks, const std::string& path) {
    auto doc = build_survey(concepts, benchmarks);
    write_file(path, doc.text);
    write_file(path + ".key.json", serialize_survey_key(doc.key));
    return doc.key;
}

namespace {

struct RawItem {
    std::string label;
    std::optional<std::string> feasibility;
    std::optional<std::string> novelty;
};

struct RawResponse {
    std::string rater;
    std::vector<RawItem> items;
};

// Returns the score or the rejection reason.
std::variant<int, std::string> read_score(const std::optional<std::string>& field) {
    if (!field || field->empty()) return std::string("missing");
    int v = 0;
    const auto* first = field->data();
    const auto* last = first + field->size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::string("format");
    if (v < 1 || v > 5) return std::string("range");
    return v;
}

} // namespace

ImportResult parse_scores(std::string_view text, const std::string& source, const SurveyKey* key) {
    std::vector<RawResponse> responses;
    auto open_response = [&](std::string rater) { responses.push_back({std::move(rater), {}}); };

    detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') return;
        if (starts_with(line, kRaterField)) {
            open_response(trim(std::string_view(line).substr(kRaterField.size())));
            return;
        }
        if (line.front() == '[' && line.back() == ']') {
            if (responses.empty()) open_response({});
            responses.back().items.push_back({line.substr(1, line.size() - 2), {}, {}});
            return;
        }
        const bool is_f = starts_with(line, kFeasibilityField);
        const bool is_n = starts_with(line, kNoveltyField);
        if (!is_f && !is_n) return;
        if (responses.empty() || responses.back().items.empty()) {
            throw Error(Errc::FormatError, "score field outside an item", source, line_no);
        }
        auto& item = responses.back().items.back();
        auto& slot = is_f ? item.feasibility : item.novelty;
        if (slot) throw Error(Errc::FormatError, "repeated score field in " + item.label, source, line_no);
        slot = trim(std::string_view(line).substr((is_f ? kFeasibilityField : kNoveltyField).size()));
    });

    ImportResult result;
    for (std::size_t r = 0; r < responses.size(); ++r) {
        auto& resp = responses[r];
        if (resp.rater.empty()) resp.rater = source + "#" + std::to_string(r + 1);
        ++result.responses;
        std::vector<ScoreRecord> records;
        std::vector<Rejection> rejections;
        auto reject = [&](const std::string& item, const std::string& reason) {
            rejections.push_back({source, resp.rater, item, reason});
        };
        std::set<std::string> seen;
        for (const auto& item : resp.items) {
            std::string concept_id = item.label;
            if (key) {
                const auto* entry = key->find(item.label);
                if (!entry) {
                    reject(item.label, "unknown item");
                    continue;
                }
                concept_id = entry->concept_id;
            }
            seen.insert(item.label);
            auto f = read_score(item.feasibility);
            auto n = read_score(item.novelty);
            if (auto* why = std::get_if<std::string>(&f)) {
                reject(item.label, *why);
                continue;
            }
            if (auto* why = std::get_if<std::string>(&n)) {
                reject(item.label, *why);
                continue;
            }
            records.push_back({concept_id, resp.rater, std::get<int>(f), std::get<int>(n)});
        }
        if (key) {
            for (const auto& e : key->items) {
                if (!seen.contains(e.label)) reject(e.label, "missing");
            }
        }
        if (resp.items.empty() && !key) reject({}, "missing");
        if (rejections.empty()) {
            ++result.usable_responses;
            result.records.insert(result.records.end(), records.begin(), records.end());
        } else {
            result.rejections.insert(result.rejections.end(), rejections.begin(), rejections.end());
        }
    }
    return result;
}

ImportResult import_scores(const std::string& path, const SurveyKey* key) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(path, ec)) throw Error(Errc::MissingFile, "no such file or directory", path);
    if (!fs::is_directory(path, ec)) return parse_scores(read_file(path), path, key);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    ImportResult all;
    for (const auto& f : files) {
        auto part = parse_scores(read_file(f.string()), f.filename().string(), key);
        all.records.insert(all.records.end(), part.records.begin(), part.records.end());
        all.rejections.insert(all.rejections.end(), part.rejections.begin(), part.rejections.end());
        all.responses += part.responses;
        all.usable_responses += part.usable_responses;
    }
    return all;
}

ScoreSummary score_summary(const std::vector<ScoreRecord>& records,
                           const std::map<std::string, std::string>& concept_index) {
    ScoreSummary s;
    std::set<std::string> raters;
    for (const auto& r : records) {
        auto it = concept_index.find(r.concept_id);
        if (it == concept_index.end()) throw Error(Errc::UnknownConcept, "concept is not in the index", r.concept_id);
        if (r.feasibility < 1 || r.feasibility > 5 || r.novelty < 1 || r.novelty > 5) {
            throw Error(Errc::InvalidArgument, "score outside 1..5", r.concept_id);
        }
        auto& g = s.groups[it->second];
        ++g.count;
        g.mean_feasibility += r.feasibility;
        g.mean_novelty += r.novelty;
        ++g.feasibility_histogram[static_cast<std::size_t>(r.feasibility - 1)];
        ++g.novelty_histogram[static_cast<std::size_t>(r.novelty - 1)];
        raters.insert(r.rater_id);
    }
    for (auto& [name, g] : s.groups) {
        const auto n = static_cast<double>(g.count);
        g.mean_feasibility /= n;
        g.mean_novelty /= n;
        g.mean_average = (g.mean_feasibility + g.mean_novelty) / 2.0;
    }
    s.records = records.size();
    s.raters = raters.size();
    return s;
}

std::string score_summary_to_json(const ScoreSummary& summary) {
    ojson groups = ojson::object();
    for (const auto& [name, g] : summary.groups) {
        ojson j;
        j["count"] = g.count;
        j["mean_feasibility"] = g.mean_feasibility;
        j["mean_novelty"] = g.mean_novelty;
        j["mean_average"] = g.mean_average;
        j["feasibility_histogram"] = g.feasibility_histogram;
        j["novelty_histogram"] = g.novelty_histogram;
        groups[name] = j;
    }
    ojson root;
    root["records"] = summary.records;
    root["raters"] = summary.raters;
    root["groups"] = groups;
    return root.dump(2) + "\n";
}

std::string render_score_summary(const ScoreSummary& summary) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %5s %12s %8s %8s  %-15s %-15s\n", "group", "n", "feasibility",
                  "novelty", "average", "feas 1..5", "nov 1..5");
    out << buf;
    auto hist = [](const std::array<std::size_t, 5>& h) {
        std::string s;
        for (std::size_t i = 0; i < h.size(); ++i) s += (i ? " " : "") + std::to_string(h[i]);
        return s;
    };
    for (const auto& [name, g] : summary.groups) {
        std::snprintf(buf, sizeof buf, "%-10s %5zu %12.2f %8.2f %8.2f  %-15s %-15s\n", name.c_str(), g.count,
                      g.mean_feasibility, g.mean_novelty, g.mean_average, hist(g.feasibility_histogram).c_str(),
                      hist(g.novelty_histogram).c_str());
        out << buf;
    }
    out << "raters: " << summary.raters << ", records: " << summary.records << "\n";
    return out.str();
}

} // namespace bidforge
