// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/diversity.hpp"
#include "bidforge/error.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <vector>

using namespace bidforge;

namespace {

EmbeddingTable line_table() {
    EmbeddingTable t(1);
    for (int i = 0; i <= 10; ++i) {
        const std::vector<float> v{static_cast<float>(i)};
        t.add("p" + std::to_string(i), v);
    }
    return t;
}

GeneratedConcept concept_with(std::string id, GeneratorType t, std::string innovation) {
    GeneratedConcept c;
    c.concept_id = std::move(id);
    c.gtype = t;
    c.innovation = std::move(innovation);
    return c;
}

} // namespace

TEST_CASE("summary statistics") {
    const std::vector<double> v{4, 1, 3, 2};
    const auto s = summarize(v);
    CHECK(s.count == 4);
    CHECK(s.min == 1);
    CHECK(s.max == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.median == doctest::Approx(2.5));
    CHECK(s.q1 == doctest::Approx(1.75));
    CHECK(s.q3 == doctest::Approx(3.25));
    CHECK(s.bin_width == doctest::Approx(0.2));
    std::size_t total = 0;
    for (auto h : s.histogram) total += h;
    CHECK(total == 4);
    CHECK(s.histogram[19] == 1); // the maximum lands in the closed last bin
    CHECK(s.histogram[5] == 1);
    CHECK(s.histogram[10] == 1);
    CHECK(s.histogram[15] == 1);
}

TEST_CASE("summary edge cases") {
    const auto empty = summarize({});
    CHECK(empty.count == 0);
    CHECK(empty.max == 0.0);
    const std::vector<double> zeros{0, 0, 0};
    const auto z = summarize(zeros);
    CHECK(z.count == 3);
    CHECK(z.max == 0.0);
    CHECK(z.histogram[0] == 3);
    const std::vector<double> one{7};
    const auto o = summarize(one);
    CHECK(o.median == 7);
    CHECK(o.q1 == 7);
    CHECK(o.q3 == 7);
}

TEST_CASE("identical texts are at distance zero") {
    const auto t = line_table();
    std::vector<GeneratedConcept> cs;
    for (int i = 0; i < 5; ++i) cs.push_back(concept_with("c" + std::to_string(i), GeneratorType::Type1, "p1 p2 p3"));
    const auto r = diversity_report(cs, "p3 p2 p1", t, {}, 2);
    REQUIRE(r.entries.size() == 5);
    for (const auto& e : r.entries) CHECK(e.distance == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.summary.max == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("report groups by type and lists skipped concepts") {
    const auto t = line_table();
    std::vector<GeneratedConcept> cs{
        concept_with("a", GeneratorType::Type1, "p2"),
        concept_with("b", GeneratorType::Type3, "p5"),
        concept_with("c", GeneratorType::Type3, "nothing known here"),
        concept_with("d", GeneratorType::Type3, "p0 p10"),
    };
    const auto r = diversity_report(cs, "p0", t, {}, 1);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].concept_id == "a");
    CHECK(r.entries[0].distance == doctest::Approx(2.0));
    CHECK(r.entries[2].distance == doctest::Approx(5.0));
    CHECK(r.skipped == std::vector<std::string>{"c"});
    CHECK(r.by_type.at(GeneratorType::Type3).count == 2);
    CHECK(r.summary.count == 3);

    const auto parallel = diversity_report(cs, "p0", t, {}, 4);
    CHECK(diversity_to_json(parallel) == diversity_to_json(r));

    const auto j = nlohmann::json::parse(diversity_to_json(r));
    CHECK(j["skipped"][0] == "c");
    const auto csv = diversity_to_csv(r);
    CHECK(csv.rfind("concept_id,type,distance\n", 0) == 0);
    CHECK(csv.find("\nc,") == std::string::npos);
}

TEST_CASE("invalid inputs") {
    const auto t = line_table();
    try {
        diversity_report({concept_with("a", GeneratorType::Type1, "p1")}, "unknown words", t, {});
        FAIL("accepted an empty reference");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EmptyDocument);
        CHECK(e.subject() == "reference");
    }
    CHECK_THROWS_AS(diversity_report({}, "p1", t, {}), Error);
}
