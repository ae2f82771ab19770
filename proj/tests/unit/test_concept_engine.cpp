// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/concept_engine.hpp"
#include "bidforge/error.hpp"
#include "bidforge/markup.hpp"
#include "bidforge/mock_backend.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <random>
#include <set>

using namespace bidforge;

namespace {

// Backend whose completion text is produced by a callback.
class ScriptBackend : public CompletionBackend {
public:
    using Fn = std::function<CompletionChoice(const CompletionRequest&)>;
    explicit ScriptBackend(Fn fn) : fn_(std::move(fn)) {}

    std::string name() const override { return "script"; }
    std::vector<CompletionChoice> complete(const CompletionRequest& r) override {
        {
            std::lock_guard lock(mu_);
            nonces.push_back(r.nonce);
        }
        return {fn_(r)};
    }
    CreatedJob create_fine_tune(const FineTuneRequest&) override { return {}; }
    JobStatus retrieve_fine_tune(const std::string&) override { return {}; }

    std::vector<std::uint64_t> nonces;

private:
    Fn fn_;
    std::mutex mu_;
};

GatewayOptions fast() {
    GatewayOptions o;
    o.requests_per_minute = 0;
    return o;
}

const std::string kGood = " [Bio]Birds have hollow bones.[/Bio][Inno]A hollow frame.[/Inno]\n[END]";

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidArgument;
}

ConceptEvaluation fake_eval(GeneratorType t, bool problem, bool bio, std::string id = "c") {
    ConceptEvaluation ev;
    ev.concept_id = std::move(id);
    ev.gtype = t;
    if (auto p = problem_pair(t)) {
        ev.verdicts[*p] = {*p, problem ? Label::Related : Label::Unrelated, 0.8};
    }
    ev.verdicts[EvaluatorPair::BioInnovation] = {EvaluatorPair::BioInnovation,
                                                 bio ? Label::Related : Label::Unrelated, 0.8};
    apply_threshold(ev, 0.5);
    return ev;
}

std::map<EvaluatorPair, std::string> all_models() {
    return {{EvaluatorPair::BenefitsInnovation, "mock-cls-ben"},
            {EvaluatorPair::ChallengeInnovation, "mock-cls-cha"},
            {EvaluatorPair::BioInnovation, "mock-cls-bio"}};
}

} // namespace

TEST_CASE("prompt assembly matches the training template") {
    ProblemSpec s;
    s.applications = {"flying car"};
    CHECK(assemble_prompt(s, GeneratorType::Type1) == "Applications: flying car\n\n###\n\n");
    s.benefits = {"lightweight"};
    CHECK(assemble_prompt(s, GeneratorType::Type2) ==
          "Benefits: lightweight\nApplications: flying car\n\n###\n\n");
    s.challenge = "Cars are heavy.";
    CHECK(assemble_prompt(s, GeneratorType::Type3) == "Challenge: Cars are heavy.\n\n###\n\n");
    CHECK(code_of([&] { assemble_prompt(s, GeneratorType::NegGen); }) == Errc::InvalidArgument);
    CHECK(code_of([] { assemble_prompt({}, GeneratorType::Type1); }) == Errc::MissingField);

    const auto rec = testing::make_record("r");
    ProblemSpec from_rec{rec.applications, rec.benefits, rec.challenge};
    for (auto t : {GeneratorType::Type1, GeneratorType::Type2, GeneratorType::Type3}) {
        CHECK(assemble_prompt(from_rec, t) == render_generator_example(rec, t).prompt);
    }
}

TEST_CASE("parse generation") {
    const auto [bio, inno] = parse_generation("[Bio] A [/Bio][Inno]B[/Inno]");
    CHECK(bio == "A");
    CHECK(inno == "B");
    CHECK(code_of([] { parse_generation("[Inno]B[/Inno]"); }) == Errc::MalformedMarkup);
    CHECK(code_of([] { parse_generation("[Bio]A[/Bio]"); }) == Errc::MalformedMarkup);
    CHECK(code_of([] { parse_generation("[Bio] [/Bio][Inno]B[/Inno]"); }) == Errc::EmptyBlock);
    CHECK(code_of([] { parse_generation("[Bio]A[/Bio][Inno]B[/Inno][Cha]C[/Cha]"); }) ==
          Errc::MalformedMarkup);
    CHECK(code_of([] { parse_generation("plain text"); }) == Errc::MalformedMarkup);
}

TEST_CASE("generation with the mock yields n concepts in slot order") {
    Gateway gw(std::make_shared<MockBackend>(5), fast());
    ProblemSpec s;
    s.challenge = "Delivery drones run out of battery too fast.";
    GenerationParams p;
    p.model_id = "mock-gen";
    p.run_id = "t3";
    const auto r = generate_concepts(gw, s, GeneratorType::Type3, 50, p);
    REQUIRE(r.concepts.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(r.concepts[i].concept_id == "t3-" + std::to_string(i));
        CHECK(r.concepts[i].gtype == GeneratorType::Type3);
        CHECK(!r.concepts[i].biomimicry.empty());
    }
    p.workers = 1;
    const auto serial = generate_concepts(gw, s, GeneratorType::Type3, 50, p);
    CHECK(serial.concepts == r.concepts);
}

TEST_CASE("malformed outputs are retried with fresh nonces") {
    // Slot 0 fails twice; slot 1 fails every attempt.
    auto backend = std::make_shared<ScriptBackend>([](const CompletionRequest& r) {
        const auto slot = r.nonce / 4;
        const auto attempt = r.nonce % 4;
        if (slot == 0 && attempt < 2) return CompletionChoice{"[Inno]only[/Inno]", {}};
        if (slot == 1) return CompletionChoice{"[Bio] [/Bio][Inno]x[/Inno]", {}};
        return CompletionChoice{kGood, {}};
    });
    Gateway gw(backend, fast());
    ProblemSpec s;
    s.applications = {"drone"};
    GenerationParams p;
    p.model_id = "gen";
    p.run_id = "x";
    p.workers = 1;
    const auto r = generate_concepts(gw, s, GeneratorType::Type1, 3, p);
    REQUIRE(r.concepts.size() == 2);
    CHECK(r.concepts[0].concept_id == "x-0");
    CHECK(r.concepts[1].concept_id == "x-2");
    CHECK(r.concepts[0].innovation == "A hollow frame.");
    REQUIRE(r.skipped.size() == 6);
    CHECK(r.skipped[0].slot == 0);
    CHECK(r.skipped[1].attempt == 1);
    CHECK(std::count_if(r.skipped.begin(), r.skipped.end(), [](const auto& k) { return k.slot == 1; }) ==
          4);
    CHECK(backend->nonces == std::vector<std::uint64_t>{0, 1, 2, 4, 5, 6, 7, 8});
}

TEST_CASE("all malformed and bad parameters") {
    Gateway gw(std::make_shared<ScriptBackend>([](const CompletionRequest&) {
                   return CompletionChoice{"no markup here", {}};
               }),
               fast());
    ProblemSpec s;
    s.applications = {"drone"};
    GenerationParams p;
    p.model_id = "gen";
    CHECK(code_of([&] { generate_concepts(gw, s, GeneratorType::Type1, 4, p); }) == Errc::AllMalformed);
    CHECK(code_of([&] { generate_concepts(gw, s, GeneratorType::Type1, 0, p); }) == Errc::InvalidArgument);
    p.model_id.clear();
    CHECK(code_of([&] { generate_concepts(gw, s, GeneratorType::Type1, 1, p); }) == Errc::InvalidArgument);
}

TEST_CASE("evaluated pairs per generator type") {
    CHECK(applicable_pairs(GeneratorType::Type1) == std::vector{EvaluatorPair::BioInnovation});
    CHECK(applicable_pairs(GeneratorType::Type2) ==
          std::vector{EvaluatorPair::BenefitsInnovation, EvaluatorPair::BioInnovation});
    CHECK(applicable_pairs(GeneratorType::Type3) ==
          std::vector{EvaluatorPair::ChallengeInnovation, EvaluatorPair::BioInnovation});
    CHECK_FALSE(problem_pair(GeneratorType::Type1).has_value());
}

TEST_CASE("evaluation with scripted probabilities") {
    auto mock = std::make_shared<MockBackend>(1);
    Gateway gw(mock, fast());
    GeneratedConcept c;
    c.concept_id = "c1";
    c.gtype = GeneratorType::Type3;
    c.spec.challenge = "Cars are heavy.";
    c.biomimicry = "Birds have hollow bones.";
    c.innovation = "A hollow frame.";
    const std::string sep(kPromptSeparator);
    mock->script_probabilities(mark("Cars are heavy.", "Cha") + mark("A hollow frame.", "Inno") + sep, 0.9, 0.3);
    mock->script_probabilities(mark("Birds have hollow bones.", "Bio") + mark("A hollow frame.", "Inno") + sep,
                               0.2, 0.6);
    auto ev = evaluate_concept(gw, c, all_models());
    CHECK(ev.verdicts.size() == 2);
    CHECK(ev.verdicts.at(EvaluatorPair::ChallengeInnovation).confidence == doctest::Approx(0.75));
    CHECK(ev.passed.at(EvaluatorPair::ChallengeInnovation));
    CHECK_FALSE(ev.passed.at(EvaluatorPair::BioInnovation));
    CHECK_FALSE(ev.overall);

    apply_threshold(ev, 0.8);
    CHECK_FALSE(ev.passed.at(EvaluatorPair::ChallengeInnovation));
    CHECK_THROWS_AS(apply_threshold(ev, 0.4), Error);
    CHECK_THROWS_AS(apply_threshold(ev, 1.0), Error);

    c.gtype = GeneratorType::Type1;
    const auto t1 = evaluate_concept(gw, c, all_models());
    CHECK(t1.verdicts.size() == 1);
    CHECK(t1.verdicts.contains(EvaluatorPair::BioInnovation));

    c.gtype = GeneratorType::Type2;
    c.spec.benefits = {"Lightweight"};
    mock->script_probabilities(mark("lightweight", "Ben") + mark("A hollow frame.", "Inno") + sep, 0.7, 0.1);
    mock->script_probabilities(mark("Birds have hollow bones.", "Bio") + mark("A hollow frame.", "Inno") + sep,
                               0.95, 0.05);
    const auto t2 = evaluate_concept(gw, c, all_models());
    CHECK(t2.verdicts.at(EvaluatorPair::BenefitsInnovation).confidence == doctest::Approx(0.875));
    CHECK(t2.overall);

    auto missing = all_models();
    missing.erase(EvaluatorPair::BenefitsInnovation);
    CHECK(code_of([&] { evaluate_concept(gw, c, missing); }) == Errc::MissingEvaluatorModel);
}

TEST_CASE("pass-rate percentages round half up") {
    CHECK(RateCell{42, 50}.percent() == 84);
    CHECK(RateCell{22, 50}.percent() == 44);
    CHECK(RateCell{1, 8}.percent() == 13);
    CHECK(RateCell{1, 200}.percent() == 1);
    CHECK(RateCell{0, 0}.percent() == 0);
}

TEST_CASE("aggregation counts each column") {
    std::vector<ConceptEvaluation> evs;
    for (int i = 0; i < 50; ++i) evs.push_back(fake_eval(GeneratorType::Type3, i < 42, i % 2 == 0 || i >= 40));
    const auto row = aggregate(evs);
    REQUIRE(row.problem_solution.has_value());
    CHECK(row.problem_solution->passing == 42);
    CHECK(row.problem_solution->percent() == 84);
    CHECK(row.nature_solution.passing == 30);
    CHECK(row.overall.passing == 22);
    CHECK(row.overall.percent() == 44);
    CHECK(row.overall.passing <= std::min(row.problem_solution->passing, row.nature_solution.passing));

    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
        std::shuffle(evs.begin(), evs.end(), rng);
        const auto again = aggregate(evs);
        CHECK(again.overall.passing == row.overall.passing);
        CHECK(again.nature_solution.passing == row.nature_solution.passing);
    }

    std::vector<ConceptEvaluation> t1{fake_eval(GeneratorType::Type1, false, true)};
    CHECK_FALSE(aggregate(t1).problem_solution.has_value());
    t1.push_back(fake_eval(GeneratorType::Type2, true, true));
    CHECK(code_of([&] { aggregate(t1); }) == Errc::MixedTypes);
    CHECK(code_of([] { aggregate({}); }) == Errc::EmptyInput);
}

TEST_CASE("raising the threshold never raises a pass rate") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    std::vector<ConceptEvaluation> evs;
    for (int i = 0; i < 200; ++i) {
        ConceptEvaluation ev;
        ev.gtype = GeneratorType::Type2;
        for (auto p : applicable_pairs(ev.gtype)) {
            ev.verdicts[p] = {p, rng() % 4 == 0 ? Label::Unrelated : Label::Related, u(rng)};
        }
        evs.push_back(ev);
    }
    std::size_t last_overall = evs.size() + 1;
    std::size_t last_bio = evs.size() + 1;
    for (double t = 0.5; t < 1.0; t += 0.05) {
        for (auto& ev : evs) apply_threshold(ev, t);
        const auto row = aggregate(evs);
        CHECK(row.overall.passing <= last_overall);
        CHECK(row.nature_solution.passing <= last_bio);
        last_overall = row.overall.passing;
        last_bio = row.nature_solution.passing;
    }
}

TEST_CASE("aggregate by type orders rows and renders N/A") {
    std::vector<ConceptEvaluation> evs{fake_eval(GeneratorType::Type3, true, true),
                                       fake_eval(GeneratorType::Type1, false, true),
                                       fake_eval(GeneratorType::Type1, false, false)};
    const auto table = aggregate_by_type(evs);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].gtype == GeneratorType::Type1);
    CHECK(table.rows[0].overall.passing == 1);
    const auto text = render_pass_rates(table);
    CHECK(text.find("N/A") != std::string::npos);
    CHECK(text.find("Problem-Solution") != std::string::npos);
    CHECK(text.find("50% (1/2)") != std::string::npos);

    const auto only1 = render_pass_rates(aggregate_by_type({evs[1], evs[2]}));
    CHECK(only1.find("Problem-Solution") == std::string::npos);
}

TEST_CASE("classifier accuracy") {
    auto mock = std::make_shared<MockBackend>(1);
    Gateway gw(mock, fast());
    std::vector<LabeledExample> labeled;
    for (int i = 0; i < 10; ++i) {
        const auto text = mark("a" + std::to_string(i), "Bio") + mark("b", "Inno");
        const bool rel = i % 2 == 0;
        mock->script_probabilities(text + std::string(kPromptSeparator), rel ? 0.8 : 0.1, rel ? 0.2 : 0.9);
        labeled.push_back({"r", EvaluatorPair::BioInnovation, text, rel ? Label::Related : Label::Unrelated});
    }
    CHECK(measure_accuracy(gw, "mock-cls", labeled) == doctest::Approx(1.0));
    for (auto& ex : labeled) ex.label = ex.label == Label::Related ? Label::Unrelated : Label::Related;
    CHECK(measure_accuracy(gw, "mock-cls", labeled) == doctest::Approx(0.0));
    CHECK(code_of([&] { measure_accuracy(gw, "mock-cls", {}); }) == Errc::EmptyInput);
}

TEST_CASE("run artifacts round trip") {
    testing::TempDir dir;
    Gateway gw(std::make_shared<MockBackend>(2), fast());
    ProblemSpec s;
    s.applications = {"drone"};
    s.benefits = {"quiet"};
    GenerationParams p;
    p.model_id = "mock-gen";
    const auto gen = generate_concepts(gw, s, GeneratorType::Type2, 5, p);
    write_concepts(gen.concepts, dir.file("c.jsonl"));
    CHECK(read_concepts(dir.file("c.jsonl")) == gen.concepts);

    const auto evs = evaluate_concepts(gw, gen.concepts, all_models());
    write_evaluations(evs, dir.file("e.jsonl"));
    const auto back = read_evaluations(dir.file("e.jsonl"));
    REQUIRE(back.size() == evs.size());
    for (std::size_t i = 0; i < evs.size(); ++i) {
        CHECK(back[i].concept_id == evs[i].concept_id);
        CHECK(back[i].passed == evs[i].passed);
        CHECK(back[i].overall == evs[i].overall);
        CHECK(evaluation_to_json_line(back[i]) == evaluation_to_json_line(evs[i]));
    }
}
