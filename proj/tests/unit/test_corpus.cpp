// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/corpus.hpp"
#include "bidforge/error.hpp"
#include "bidforge/text.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <set>

using namespace bidforge;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidArgument;
}

std::string line_for(const InnovationRecord& r) { return serialize_record(r); }

} // namespace

TEST_CASE("valid record has no violations") {
    CHECK(validate_record(testing::make_record("a")).empty());
}

TEST_CASE("empty applications is one violation") {
    auto r = testing::make_record("a");
    r.applications.clear();
    const auto v = validate_record(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rfind("applications", 0) == 0);
}

TEST_CASE("duplicate keyword is reported") {
    auto r = testing::make_record("a");
    r.benefits = {"lightweight", "lightweight"};
    const auto v = validate_record(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "benefits: duplicate keyword");
}

TEST_CASE("blank paragraph fields are violations") {
    auto r = testing::make_record("a");
    r.biomimicry = "   ";
    r.challenge = "";
    CHECK(validate_record(r).size() == 2);
}

TEST_CASE("normalization is idempotent and dedups keywords") {
    InnovationRecord r = testing::make_record("a");
    r.benefits = {"  Lightweight ", "lightweight", "Strength"};
    r.challenge = "  Two   spaces\n\nand lines ";
    const auto once = normalize_record(r);
    CHECK(once.benefits == std::vector<std::string>{"lightweight", "strength"});
    CHECK(once.challenge == "Two spaces and lines");
    CHECK(normalize_record(once) == once);
}

TEST_CASE("load, serialize and reload round-trip") {
    testing::TempDir dir;
    auto corpus = testing::make_corpus(5);
    corpus.records[2].challenge = "Paragraph with \"quotes\" and unicode caf\xc3\xa9.";
    save_corpus(corpus, dir.file("c.jsonl"));
    const auto a = load_corpus(dir.file("c.jsonl"));
    save_corpus(a, dir.file("d.jsonl"));
    const auto b = load_corpus(dir.file("d.jsonl"));
    CHECK(a.records == b.records);
    CHECK(read_file(dir.file("c.jsonl")) == read_file(dir.file("d.jsonl")));
    CHECK(a.records == corpus.records);
}

TEST_CASE("serialized keys follow the declared order") {
    const auto line = serialize_record(testing::make_record("a"));
    const auto pos = [&](const char* k) { return line.find(std::string("\"") + k + "\""); };
    CHECK(pos("id") < pos("benefits"));
    CHECK(pos("benefits") < pos("applications"));
    CHECK(pos("applications") < pos("challenge"));
    CHECK(pos("challenge") < pos("innovation"));
    CHECK(pos("innovation") < pos("biomimicry"));
}

TEST_CASE("load errors") {
    testing::TempDir dir;
    CHECK(code_of([&] { load_corpus(dir.file("missing.jsonl")); }) == Errc::MissingFile);

    write_file(dir.file("empty.jsonl"), "");
    CHECK(code_of([&] { load_corpus(dir.file("empty.jsonl")); }) == Errc::EmptyCorpus);

    write_file(dir.file("bad.jsonl"), line_for(testing::make_record("a")) + "{not json\n");
    try {
        load_corpus(dir.file("bad.jsonl"));
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK(e.position() == 2u);
    }

    auto blank = testing::make_record("b7");
    blank.biomimicry = " ";
    write_file(dir.file("blank.jsonl"), line_for(testing::make_record("a")) + line_for(blank));
    try {
        load_corpus(dir.file("blank.jsonl"));
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ValidationError);
        CHECK(e.subject() == "b7");
        CHECK(std::string(e.what()).find("biomimicry") != std::string::npos);
    }

    write_file(dir.file("dup.jsonl"), line_for(testing::make_record("a")) + line_for(testing::make_record("a")));
    CHECK(code_of([&] { load_corpus(dir.file("dup.jsonl")); }) == Errc::ValidationError);
}

TEST_CASE("a corpus of 221 records loads whole") {
    testing::TempDir dir;
    save_corpus(testing::make_corpus(221), dir.file("c.jsonl"));
    CHECK(load_corpus(dir.file("c.jsonl")).size() == 221);
    CHECK(corpus_stats(load_corpus(dir.file("c.jsonl"))).record_count == 221);
}

TEST_CASE("split sizes and partition") {
    const auto corpus = testing::make_corpus(221);
    auto [train, val] = split_corpus(corpus, {0.8, 42});
    CHECK(train.size() == 176);
    CHECK(val.size() == 45);
    std::set<std::string> ids;
    for (const auto& r : train.records) ids.insert(r.id);
    for (const auto& r : val.records) CHECK(ids.insert(r.id).second);
    CHECK(ids.size() == 221);

    auto [t2, v2] = split_corpus(corpus, {0.8, 42});
    CHECK(t2.records == train.records);
    CHECK(v2.records == val.records);

    auto [all, none] = split_corpus(corpus, {1.0, 42});
    CHECK(all.size() == 221);
    CHECK(none.size() == 0);

    auto [t3, v3] = split_corpus(corpus, {0.8, 43});
    CHECK(t3.records != train.records);
}

TEST_CASE("split of an empty corpus fails") {
    CHECK(code_of([] { split_corpus(Corpus{}, {}); }) == Errc::EmptyCorpus);
}

TEST_CASE("stats count words and application frequency") {
    Corpus c;
    auto r = testing::make_record("a");
    r.challenge = "one two three four five six seven eight nine ten";
    r.applications = {"drone"};
    c.records.push_back(r);
    auto s = corpus_stats(c);
    CHECK(s.challenge.mean_words == doctest::Approx(10.0));
    CHECK(s.challenge.max_words == 10);

    auto r2 = testing::make_record("b");
    r2.applications = {"drone", "boat"};
    c.records.push_back(r2);
    s = corpus_stats(c);
    REQUIRE(!s.top_applications.empty());
    CHECK(s.top_applications[0] == std::pair<std::string, std::size_t>{"drone", 2});
    CHECK(code_of([] { corpus_stats(Corpus{}); }) == Errc::EmptyCorpus);

    const auto j = nlohmann::json::parse(stats_to_json(s));
    CHECK(j["record_count"] == 2);
}
