// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/error.hpp"
#include "bidforge/study_kit.hpp"
#include "bidforge/text.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

using namespace bidforge;

namespace {

const char* kLexicon = R"(# test lexicon
[birds]
bird
hummingbird
owl
[insects]
beetle
butterfly
[reptiles]
pterosaur
gecko
[plants]
lotus
)";

GeneratedConcept bio(std::string id, std::string text, GeneratorType t = GeneratorType::Type1) {
    GeneratedConcept c;
    c.concept_id = std::move(id);
    c.gtype = t;
    c.biomimicry = std::move(text);
    c.innovation = "A quiet fan blade.";
    return c;
}

std::vector<GeneratedConcept> six_concepts() {
    std::vector<GeneratedConcept> cs;
    for (int i = 0; i < 6; ++i) cs.push_back(bio("t3-" + std::to_string(i), "Owls fly silently.", GeneratorType::Type3));
    return cs;
}

std::vector<BenchmarkConcept> two_benchmarks() {
    return {{"bench-a", "Lotus leaves shed water.", "A self-cleaning coating."},
            {"bench-b", "Geckos cling to walls.", "A dry adhesive tape."}};
}

// Fills a blank survey: score(item_index) gives (feasibility, novelty) text.
std::string fill_survey(const std::string& blank, const std::string& rater,
                 const std::function<std::pair<std::string, std::string>(std::size_t)>& score) {
    std::istringstream in(blank);
    std::string out;
    std::size_t item = 0;
    for (std::string line; std::getline(in, line);) {
        if (line == "rater:") {
            line += " " + rater;
        } else if (line == "feasibility:") {
            line += " " + score(item).first;
        } else if (line == "novelty:") {
            line += " " + score(item).second;
            ++item;
        }
        out += line + "\n";
    }
    return out;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("lexicon parsing and plural forms") {
    const auto lex = parse_lexicon(kLexicon);
    REQUIRE(lex.categories().size() == 5);
    CHECK(lex.categories().back().name == "other");
    CHECK(lex.lookup("hummingbirds") == lex.index_of("birds"));
    CHECK(lex.lookup("butterflies") == lex.index_of("insects"));
    CHECK(lex.lookup("beetles") == lex.index_of("insects"));
    CHECK(lex.lookup("lotuses") == lex.index_of("plants"));
    CHECK_FALSE(lex.lookup("dog").has_value());

    CHECK(code_of([] { parse_lexicon("bird\n[birds]\n"); }) == Errc::FormatError);
    CHECK(code_of([] { parse_lexicon("[a]\nbird\n[b]\nbird\n"); }) == Errc::ValidationError);
    CHECK(code_of([] { parse_lexicon("[a]\nsea turtle\n"); }) == Errc::ValidationError);
    CHECK(code_of([] { parse_lexicon("[a]\nx\n[a]\ny\n"); }) == Errc::ValidationError);
    CHECK(code_of([] { parse_lexicon("[other]\nx\n"); }) == Errc::ValidationError);
}

TEST_CASE("y to ies plural") {
    const auto lex = parse_lexicon("[insects]\nfly\nbutterfly\n");
    CHECK(lex.lookup("flies") == lex.index_of("insects"));
    CHECK(lex.lookup("butterflies") == lex.index_of("insects"));
}

TEST_CASE("categorization picks the most hits") {
    const auto lex = parse_lexicon(kLexicon);
    CHECK(categorize_bio(bio("a", "Hummingbirds hover by rotating their wings."), lex) == "birds");
    CHECK(categorize_bio(bio("b", "Pterosaurs had membranous wings."), lex) == "reptiles");
    CHECK(categorize_bio(bio("c", "Whales sing across oceans."), lex) == "other");
    CHECK(categorize_bio(bio("d", "The beetle and the owl and another beetle."), lex) == "insects");
    // Tie: the category hit first wins.
    CHECK(categorize_bio(bio("e", "A gecko watched a lotus."), lex) == "reptiles");
    CHECK(categorize_bio(bio("f", "A lotus hid a gecko."), lex) == "plants");
}

TEST_CASE("category distribution") {
    const auto lex = parse_lexicon(kLexicon);
    std::vector<GeneratedConcept> cs;
    for (int i = 0; i < 50; ++i) {
        cs.push_back(bio("c" + std::to_string(i), i < 28 ? "Birds soar on thermals." : "Lotus leaves repel water."));
    }
    const auto shares = category_distribution(cs, lex);
    REQUIRE(shares.size() == 5);
    CHECK(shares[0].category == "birds");
    CHECK(shares[0].count == 28);
    CHECK(shares[0].percent == doctest::Approx(56.0));
    CHECK(shares[3].count == 22);
    CHECK(shares[4].count == 0);

    std::mt19937_64 rng(1);
    std::shuffle(cs.begin(), cs.end(), rng);
    const auto again = category_distribution(cs, lex);
    for (std::size_t i = 0; i < shares.size(); ++i) CHECK(again[i].count == shares[i].count);
    CHECK(render_category_distribution(shares).find("birds") != std::string::npos);
    CHECK(code_of([&] { category_distribution({}, lex); }) == Errc::EmptyInput);
}

TEST_CASE("survey interleaves benchmarks blindly") {
    const auto doc = build_survey(six_concepts(), two_benchmarks());
    REQUIRE(doc.key.items.size() == 8);
    CHECK(doc.key.items[2].concept_id == "bench-a");
    CHECK(doc.key.items[5].concept_id == "bench-b");
    CHECK(doc.key.items[2].group == "benchmark");
    CHECK(doc.key.items[0].group == "type3");
    CHECK(doc.key.items[0].label == "item-01");
    CHECK(doc.key.items[7].label == "item-08");
    CHECK(doc.text.find("bench-a") == std::string::npos);
    CHECK(doc.text.find("t3-0") == std::string::npos);
    CHECK(doc.text.find("type3") == std::string::npos);
    CHECK(doc.text.find("[item-03]\nbiology: Lotus leaves shed water.\n") != std::string::npos);
    CHECK(code_of([] { build_survey({}, two_benchmarks()); }) == Errc::EmptyInput);
}

TEST_CASE("survey export is byte-stable") {
    testing::TempDir dir;
    const auto key = export_survey(six_concepts(), two_benchmarks(), dir.file("s1.txt"));
    export_survey(six_concepts(), two_benchmarks(), dir.file("s2.txt"));
    CHECK(read_file(dir.file("s1.txt")) == read_file(dir.file("s2.txt")));
    CHECK(read_file(dir.file("s1.txt.key.json")) == read_file(dir.file("s2.txt.key.json")));
    const auto back = read_survey_key(dir.file("s1.txt.key.json"));
    REQUIRE(back.items.size() == key.items.size());
    CHECK(back.find("item-06")->concept_id == "bench-b");
    CHECK(back.find("item-99") == nullptr);
    CHECK(back.concept_index().at("t3-0") == "type3");
}

TEST_CASE("import keeps complete responses and rejects bad ones whole") {
    testing::TempDir dir;
    const auto doc = build_survey(six_concepts(), two_benchmarks());
    std::filesystem::create_directory(dir.path() / "responses");
    for (int r = 0; r < 10; ++r) {
        const auto text = fill_survey(doc.text, "rater" + std::to_string(r), [&](std::size_t item) {
            if (r == 4 && item == 3) return std::pair<std::string, std::string>{"6", "3"};
            return std::pair<std::string, std::string>{std::to_string(1 + (item + r) % 5), "4"};
        });
        write_file((dir.path() / "responses" / ("r" + std::to_string(r) + ".txt")).string(), text);
    }
    const auto result = import_scores((dir.path() / "responses").string(), &doc.key);
    CHECK(result.responses == 10);
    CHECK(result.usable_responses == 9);
    CHECK(result.records.size() == 72);
    REQUIRE(result.rejections.size() == 1);
    CHECK(result.rejections[0].reason == "range");
    CHECK(result.rejections[0].rater_id == "rater4");
    CHECK(result.rejections[0].item == "item-04");
    CHECK(result.records.front().concept_id == "t3-0");
    CHECK(result.records.front().rater_id == "rater0");
}

TEST_CASE("rejection reasons") {
    const auto doc = build_survey(six_concepts(), {});
    auto one = [&](const std::function<std::pair<std::string, std::string>(std::size_t)>& f) {
        return parse_scores(fill_survey(doc.text, "r", f), "x.txt", &doc.key);
    };
    auto r = one([](std::size_t i) { return std::pair<std::string, std::string>{i == 0 ? "" : "3", "3"}; });
    REQUIRE(r.rejections.size() == 1);
    CHECK(r.rejections[0].reason == "missing");
    r = one([](std::size_t i) { return std::pair<std::string, std::string>{"3", i == 1 ? "four" : "3"}; });
    CHECK(r.rejections[0].reason == "format");
    r = one([](std::size_t) { return std::pair<std::string, std::string>{"3", "0"}; });
    CHECK(r.rejections.size() == 6);
    CHECK(r.usable_responses == 0);

    const std::string unknown = "rater: z\n[item-77]\nfeasibility: 3\nnovelty: 3\n";
    r = parse_scores(unknown, "u.txt", &doc.key);
    CHECK(r.rejections.front().reason == "unknown item");
    CHECK(r.rejections.size() == 1 + 6); // plus every keyed item missing

    r = parse_scores("", "empty.txt", &doc.key);
    CHECK(r.responses == 0);
    CHECK(r.records.empty());
    CHECK(r.rejections.empty());
}

TEST_CASE("multiple raters in one file and format errors") {
    const auto text = "rater: a\n[q1]\nfeasibility: 2\nnovelty: 5\n"
                      "rater: b\n[q1]\nfeasibility: 4\nnovelty: 1\n";
    const auto r = parse_scores(text, "f");
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[1] == ScoreRecord{"q1", "b", 4, 1});
    CHECK(code_of([] { parse_scores("rater: a\nfeasibility: 3\n", "f"); }) == Errc::FormatError);
    CHECK(code_of([] { parse_scores("[q]\nfeasibility: 3\nfeasibility: 4\n", "f"); }) == Errc::FormatError);
    CHECK(code_of([] { import_scores("/nonexistent/responses"); }) == Errc::MissingFile);
}

TEST_CASE("score summary") {
    const std::map<std::string, std::string> index{{"a", "type3"}, {"b", "benchmark"}};
    const std::vector<ScoreRecord> recs{{"a", "r1", 3, 1}, {"a", "r2", 4, 2}, {"a", "r3", 5, 3}, {"b", "r1", 2, 2}};
    const auto s = score_summary(recs, index);
    CHECK(s.records == 4);
    CHECK(s.raters == 3);
    const auto& g = s.groups.at("type3");
    CHECK(g.count == 3);
    CHECK(g.mean_feasibility == doctest::Approx(4.0));
    CHECK(g.mean_novelty == doctest::Approx(2.0));
    CHECK(g.mean_average == doctest::Approx(3.0));
    CHECK(g.feasibility_histogram == std::array<std::size_t, 5>{0, 0, 1, 1, 1});
    CHECK(s.groups.at("benchmark").count == 1);

    const auto j = nlohmann::json::parse(score_summary_to_json(s));
    CHECK(j.is_object());
    CHECK(render_score_summary(s).find("benchmark") != std::string::npos);

    try {
        score_summary({{"zzz", "r", 3, 3}}, index);
        FAIL("accepted an unknown concept");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownConcept);
        CHECK(e.subject() == "zzz");
    }
}
