// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "cli.hpp"

#include "bidforge/concept_engine.hpp"
#include "bidforge/embeddings.hpp"
#include "bidforge/error.hpp"
#include "bidforge/markup.hpp"
#include "bidforge/prompt_forge.hpp"
#include "bidforge/study_kit.hpp"
#include "bidforge/text.hpp"
#include "bidforge/transport.hpp"
#include "bidforge/wmd.hpp"
#include "lp_oracle.hpp"
#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace bidforge;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::string detail;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string data_dir() {
    if (const char* d = std::getenv("BIDFORGE_DATA_DIR"); d && *d) return d;
    return BIDFORGE_TEST_DATA_DIR;
}

// 1. Transport solver against the exhaustive oracle.
Check transport_oracle() {
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20231);
    std::size_t instances = 0;
    double worst_gap = 0.0;
    double worst_residual = 0.0;
    for (std::size_t m = 1; m <= 5; ++m) {
        for (std::size_t n = 1; n <= 5; ++n) {
            for (int rep = 0; rep < 8; ++rep) {
                const auto inst = oracle::random_instance(rng, m, n);
                TransportProblem p;
                p.supply = inst.supply;
                p.demand = inst.demand;
                p.cost = Matrix(m, n);
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = 0; j < n; ++j) p.cost(i, j) = inst.cost[i][j];
                }
                const auto ref = oracle::solve(inst);
                const auto sol = solve_transport(p);
                worst_gap = std::max(worst_gap, std::abs(sol.objective - ref.objective));
                worst_residual = std::max(worst_residual, marginal_residual(p, sol.flow));
                ++instances;
            }
        }
    }
    const double secs = seconds_since(t0);
    c.expect(instances >= 200, "fewer than 200 instances");
    c.expect(worst_gap <= 1e-9, "objective gap above 1e-9");
    c.expect(worst_residual <= 1e-9, "marginal residual above 1e-9");
    c.expect(secs < 5.0, "runtime above 5 s");
    std::ostringstream d;
    d << instances << " instances, max objective gap " << worst_gap << ", max residual " << worst_residual
      << ", " << secs << " s";
    if (!c.ok) d << "; " << c.detail;
    c.detail = d.str();
    return c;
}

// 2. WMD metric properties and the lower-bound chain.
Check wmd_properties() {
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4242);
    std::vector<std::string> vocab;
    for (int i = 0; i < 40; ++i) vocab.push_back("w" + std::to_string(i));
    const auto table = testing::random_table(vocab, 4, rng);
    std::size_t identity = 0, symmetry = 0, triangle = 0, wcd_rwmd = 0, rwmd_wmd = 0;
    const std::size_t triples = 200;
    for (std::size_t k = 0; k < triples; ++k) {
        const auto a = testing::random_doc(table, 6, rng);
        const auto b = testing::random_doc(table, 6, rng);
        const auto x = testing::random_doc(table, 6, rng);
        const auto ab = wmd(a, b);
        if (std::abs(wmd(a, a).distance) > 1e-9) ++identity;
        if (std::abs(ab.distance - wmd(b, a).distance) > 1e-9) ++symmetry;
        if (wmd(a, x).distance > ab.distance + wmd(b, x).distance + 1e-9) ++triangle;
        if (ab.wcd > ab.rwmd + 1e-9) ++wcd_rwmd;
        if (ab.rwmd > ab.distance + 1e-9) ++rwmd_wmd;
    }
    const double secs = seconds_since(t0);
    c.expect(identity == 0, "wmd(a,a) != 0");
    c.expect(symmetry == 0, "asymmetric");
    c.expect(triangle == 0, "triangle inequality violated");
    c.expect(wcd_rwmd == 0, "wcd > rwmd");
    c.expect(rwmd_wmd == 0, "rwmd > wmd");
    c.expect(secs < 5.0, "runtime above 5 s");
    std::ostringstream d;
    d << triples << " triples; violations: identity " << identity << ", symmetry " << symmetry << ", triangle "
      << triangle << ", wcd<=rwmd " << wcd_rwmd << ", rwmd<=wmd " << rwmd_wmd << "; " << secs << " s";
    if (!c.ok) d << "; first failure: " << c.detail;
    c.detail = d.str();
    return c;
}

// 3. Single-word documents.
Check single_word() {
    Check c;
    std::mt19937_64 rng(3);
    const auto table = testing::random_table({"a", "b", "c", "d", "e", "f", "g", "h"}, 16, rng);
    double worst = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t j = 0; j < table.size(); ++j) {
            const auto x = to_nbow(table.word(i), table, {});
            const auto y = to_nbow(table.word(j), table, {});
            const auto r = wmd(x, y);
            const double e = euclidean(x.vectors[0], y.vectors[0]);
            worst = std::max({worst, std::abs(r.distance - e), std::abs(r.wcd - e), std::abs(r.rwmd - e)});
        }
    }
    c.expect(worst <= 1e-12, "difference above 1e-12");
    std::ostringstream d;
    d << "64 pairs, max |difference| " << worst;
    c.detail = d.str();
    return c;
}

// 4. Embedding round trips.
Check embedding_round_trip() {
    Check c;
    std::mt19937_64 rng(50);
    std::vector<std::string> words;
    for (int i = 0; i < 1000; ++i) words.push_back("word" + std::to_string(i));
    const auto table = testing::random_table(words, 50, rng);
    for (auto f : {EmbeddingFormat::Text, EmbeddingFormat::Binary}) {
        const auto back = parse_embeddings(serialize_embeddings(table, f), f);
        bool exact = back.size() == table.size() && back.dim() == table.dim();
        for (std::size_t i = 0; exact && i < table.size(); ++i) {
            const auto a = table.vector(i);
            const auto b = back.vector(i);
            exact = back.word(i) == table.word(i) && std::memcmp(a.data(), b.data(), a.size_bytes()) == 0;
        }
        c.expect(exact, f == EmbeddingFormat::Text ? "text round trip differs" : "binary round trip differs");
    }
    c.detail = c.ok ? "1000 x 50 vectors, text and binary bit-exact" : c.detail;
    return c;
}

// 5. Dataset construction.
Check datasets() {
    Check c;
    auto corpus = testing::make_corpus(221);
    for (std::size_t i = 0; i < 221; i += 9) corpus.records[i].benefits.clear();
    std::size_t with_benefits = 0;
    for (const auto& r : corpus.records) with_benefits += r.benefits.empty() ? 0 : 1;

    for (auto t : {GeneratorType::Type1, GeneratorType::Type2, GeneratorType::Type3, GeneratorType::NegGen}) {
        const auto ds = build_generator_dataset(corpus, t);
        const auto expected = t == GeneratorType::Type2 ? with_benefits : corpus.records.size();
        c.expect(ds.examples.size() == expected, "generator dataset size for " + std::string(to_string(t)));
        for (const auto& ex : ds.examples) {
            const bool ends = ex.completion.size() >= kStopToken.size() &&
                              ex.completion.compare(ex.completion.size() - kStopToken.size(), kStopToken.size(),
                                                    kStopToken) == 0;
            c.expect(ends, "completion without the stop token");
            if (!ends) break;
            try {
                parse_marked(ex.completion.substr(0, ex.completion.size() - kStopToken.size()));
            } catch (const Error&) {
                c.expect(false, "completion does not parse");
            }
        }
    }

    std::vector<std::string> pool;
    for (const auto& r : corpus.records) pool.push_back(r.innovation);
    for (auto pair : kAllPairs) {
        const auto ds = build_evaluator_dataset(corpus, pair, pool, 11);
        std::size_t related = 0;
        std::map<std::string, std::string> own;
        for (const auto& r : corpus.records) own[r.id] = r.innovation;
        for (const auto& ex : ds.examples) {
            const auto b = parse_marked(ex.text).at("Inno");
            if (ex.label == Label::Related) {
                ++related;
            } else {
                c.expect(b != own[ex.record_id], "negative equals the record's positive");
            }
        }
        c.expect(related * 2 == ds.examples.size(), "evaluator dataset not balanced");
    }
    c.expect(compute_batch_size(221) == 1, "batch size for 221 is not 1");
    if (c.ok) c.detail = "4 generator types, 3 evaluator pairs, batch size(221) = 1";
    return c;
}

// 6. Marker round trip.
Check markers() {
    Check c;
    std::mt19937_64 rng(6);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:!?-_'\"/\n\t";
    const std::string tag_chars = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    for (int k = 0; k < 1000 && c.ok; ++k) {
        std::string text;
        for (auto len = rng() % 60; len > 0; --len) text += alphabet[rng() % alphabet.size()];
        std::string tag;
        for (auto len = 1 + rng() % 6; len > 0; --len) tag += tag_chars[rng() % tag_chars.size()];
        const auto blocks = parse_marked(mark(text, tag));
        c.expect(blocks.size() == 1 && blocks.begin()->first == tag && blocks.begin()->second == text,
                 "round trip differs for tag " + tag);
    }
    if (c.ok) c.detail = "1000 random strings and tags";
    return c;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = read_file(e.path().string());
    }
    return files;
}

// 7. Mock end-to-end determinism.
Check mock_pipeline() {
    Check c;
    testing::TempDir dir("bidforge-accept");
    const auto corpus = (fs::path(data_dir()) / "sample_corpus.jsonl").string();
    const std::string challenge =
        "Delivery drones lose too much battery charge to drag and cannot finish long routes.";
    auto pipeline = [&](const std::string& run) {
        const std::vector<std::vector<std::string>> steps{
            {"prepare", "--role", "generator", "--type", "3", "--corpus", corpus},
            {"generate", "--type", "3", "-n", "50", "--challenge", challenge},
            {"evaluate"},
            {"report"},
        };
        for (const auto& step : steps) {
            std::vector<std::string> args{"--run-dir", run, "--mock-seed", "7"};
            args.insert(args.end(), step.begin(), step.end());
            std::ostringstream out, err;
            const int rc = cli::run(args, out, err);
            c.expect(rc == 0, step.front() + " exited " + std::to_string(rc) + ": " + err.str());
            if (rc != 0) return;
        }
    };
    pipeline(dir.file("run-a"));
    pipeline(dir.file("run-b"));
    if (!c.ok) return c;
    const auto a = snapshot(dir.file("run-a"));
    c.expect(a == snapshot(dir.file("run-b")), "run directories differ");

    const auto report = a.count("report.txt") ? a.at("report.txt") : std::string{};
    c.expect(report.find("Type-3") != std::string::npos, "report lacks the Type-3 column");
    for (const char* row : {"Problem-Solution", "Nature-Solution", "Overall"}) {
        c.expect(report.find(row) != std::string::npos, std::string("report lacks ") + row);
    }
    c.expect(report.find("N/A") == std::string::npos, "report has an N/A cell");
    c.expect(report.find("Type-1") == std::string::npos && report.find("Type-2") == std::string::npos,
             "report has other type columns");

    const auto rates = nlohmann::json::parse(a.at("passrates.json"));
    std::size_t ps = 0, ns = 0, ov = 0, total = 0;
    c.expect(rates.size() == 1 && rates.contains("type3"), "pass rates hold other types");
    if (!c.ok) return c;
    const auto& row = rates.at("type3");
    c.expect(row.size() == 3 && row.contains("problem_solution"), "Type-3 row lacks a column");
    if (!c.ok) return c;
    ps = row.at("problem_solution").at("passing").get<std::size_t>();
    ns = row.at("nature_solution").at("passing").get<std::size_t>();
    ov = row.at("overall").at("passing").get<std::size_t>();
    total = row.at("overall").at("total").get<std::size_t>();
    c.expect(total == 50, "overall total is not 50");
    c.expect(ov <= std::min(ps, ns), "overall exceeds a per-pair count");
    if (c.ok) {
        c.detail = std::to_string(a.size()) + " files identical; problem-solution " + std::to_string(ps) +
                   ", nature-solution " + std::to_string(ns) + ", overall " + std::to_string(ov) + " of 50";
    }
    return c;
}

// 8. Aggregation arithmetic.
Check aggregation() {
    Check c;
    auto synthetic = [](std::size_t passing, double confidence_step) {
        std::vector<ConceptEvaluation> evs;
        for (std::size_t i = 0; i < 50; ++i) {
            ConceptEvaluation ev;
            ev.concept_id = "c" + std::to_string(i);
            ev.gtype = GeneratorType::Type3;
            const double conf = 0.5 + confidence_step * static_cast<double>(i % 10);
            const auto label = i < passing ? Label::Related : Label::Unrelated;
            for (auto p : applicable_pairs(ev.gtype)) ev.verdicts[p] = {p, label, conf};
            apply_threshold(ev, 0.5);
            evs.push_back(ev);
        }
        return evs;
    };
    const auto t42 = render_pass_rates(aggregate_by_type(synthetic(42, 0.04)));
    const auto t43 = render_pass_rates(aggregate_by_type(synthetic(43, 0.04)));
    c.expect(t42.find("84% (42/50)") != std::string::npos, "42/50 does not render as 84%");
    c.expect(t43.find("86% (43/50)") != std::string::npos, "43/50 does not render as 86%");

    auto evs = synthetic(45, 0.045);
    std::set<std::string> at05, at07;
    for (auto& ev : evs) {
        apply_threshold(ev, 0.5);
        if (ev.overall) at05.insert(ev.concept_id);
        apply_threshold(ev, 0.7);
        if (ev.overall) at07.insert(ev.concept_id);
    }
    c.expect(std::includes(at05.begin(), at05.end(), at07.begin(), at07.end()), "pass set at 0.7 not within 0.5");
    c.expect(at07.size() < at05.size(), "threshold had no effect on the synthetic set");
    if (c.ok) {
        c.detail = "84% (42/50), 86% (43/50); pass set " + std::to_string(at07.size()) + " at 0.7 within " +
                   std::to_string(at05.size()) + " at 0.5";
    }
    return c;
}

// 9. Study toolkit.
Check study_kit() {
    Check c;
    const auto lexicon = load_lexicon((fs::path(data_dir()) / "bio_lexicon.txt").string());
    std::vector<GeneratedConcept> cs;
    for (int i = 0; i < 50; ++i) {
        GeneratedConcept g;
        g.concept_id = "c" + std::to_string(i);
        g.gtype = GeneratorType::Type3;
        g.biomimicry = i < 28 ? "Hummingbirds hover by tracing a figure eight with their wings."
                              : "Sharks have skin covered in tiny ridged scales.";
        g.innovation = "A concept.";
        cs.push_back(g);
    }
    const auto shares = category_distribution(cs, lexicon);
    std::size_t sum = 0;
    double birds = -1;
    for (const auto& s : shares) {
        sum += s.count;
        if (s.category == "birds") birds = s.percent;
    }
    c.expect(sum == 50, "category counts do not sum to 50");
    c.expect(std::abs(birds - 56.0) < 1e-9, "birds share is not 56%");

    const auto doc = build_survey({cs.begin(), cs.begin() + 6}, {});
    std::string all;
    for (int r = 0; r < 10; ++r) {
        std::istringstream in(doc.text);
        std::size_t item = 0;
        for (std::string line; std::getline(in, line);) {
            if (line == "rater:") line += " rater" + std::to_string(r);
            if (line == "feasibility:") line += r == 6 && item == 2 ? " 9" : " 3";
            if (line == "novelty:") {
                line += " 4";
                ++item;
            }
            all += line + "\n";
        }
    }
    const auto result = parse_scores(all, "responses.txt", &doc.key);
    c.expect(result.responses == 10, "expected 10 responses");
    c.expect(result.usable_responses == 9, "expected 9 usable responses");
    c.expect(result.rejections.size() == 1 && result.rejections[0].rater_id == "rater6" &&
                 result.rejections[0].reason == "range",
             "expected exactly the out-of-range row to be flagged");
    if (c.ok) {
        c.detail = "birds 56% of 50; survey " + std::to_string(result.usable_responses) + " of " +
                   std::to_string(result.responses) + " usable, 1 range rejection";
    }
    return c;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"transport solver matches the exhaustive oracle", transport_oracle},
        {"WMD metric properties and bound chain", wmd_properties},
        {"single-word documents", single_word},
        {"embedding parser round trip", embedding_round_trip},
        {"dataset construction properties", datasets},
        {"marker round trip", markers},
        {"mock end-to-end determinism", mock_pipeline},
        {"aggregation arithmetic", aggregation},
        {"study toolkit", study_kit},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += c.ok ? 0 : 1;
        std::cout << (c.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << c.detail
                  << std::endl;
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
