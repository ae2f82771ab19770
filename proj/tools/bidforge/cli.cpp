// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "cli.hpp"

#include "config.hpp"
#include "manifest.hpp"

#include "bidforge/concept_engine.hpp"
#include "bidforge/corpus.hpp"
#include "bidforge/diversity.hpp"
#include "bidforge/embeddings.hpp"
#include "bidforge/parallel.hpp"
#include "bidforge/prompt_forge.hpp"
#include "bidforge/study_kit.hpp"
#include "bidforge/text.hpp"
#include "bidforge/wmd.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef BIDFORGE_SOURCE_DATA_DIR
#define BIDFORGE_SOURCE_DATA_DIR ""
#endif
#ifndef BIDFORGE_INSTALL_DATA_DIR
#define BIDFORGE_INSTALL_DATA_DIR ""
#endif

namespace bidforge::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

int exit_code_for(Errc code) noexcept {
    switch (code) {
    case Errc::IoError:
    case Errc::BackendUnavailable:
    case Errc::RateLimited:
    case Errc::NumericalFailure:
        return 1;
    default:
        return 2;
    }
}

namespace {

std::string default_data_dir() {
    if (const char* env = std::getenv("BIDFORGE_DATA_DIR"); env && *env) return env;
    std::error_code ec;
    for (const char* dir : {BIDFORGE_SOURCE_DATA_DIR, BIDFORGE_INSTALL_DATA_DIR}) {
        if (*dir && fs::exists(fs::path(dir) / "stopwords.txt", ec)) return dir;
    }
    return {};
}

std::vector<std::string> split_keywords(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto kw = normalize_keyword(item);
        if (!kw.empty() && std::find(out.begin(), out.end(), kw) == out.end()) out.push_back(kw);
    }
    return out;
}

std::string dump_pretty(const ojson& j) { return j.dump(2) + "\n"; }

void require_file(const std::string& path, const std::string& what) {
    std::error_code ec;
    if (path.empty()) throw Error(Errc::InvalidArgument, "no " + what + " given");
    if (!fs::exists(path, ec)) throw Error(Errc::MissingFile, what + " not found", path);
}

// Canonical argument list for the manifest.
class ArgList {
public:
    explicit ArgList(fs::path run_dir) : run_dir_(std::move(run_dir)) {}

    ArgList& opt(const std::string& flag, const std::string& value) {
        args_.push_back(flag);
        args_.push_back(value);
        return *this;
    }
    template <typename T>
    ArgList& num(const std::string& flag, T value) {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
        return opt(flag, std::string(buf, end));
    }
    ArgList& path(const std::string& flag, const std::string& p) {
        return opt(flag, relative_to(run_dir_, p));
    }
    ArgList& flag(const std::string& flag) {
        args_.push_back(flag);
        return *this;
    }
    std::vector<std::string> take() { return std::move(args_); }

private:
    fs::path run_dir_;
    std::vector<std::string> args_;
};

class Session {
public:
    Session(RunConfig config, fs::path run_dir, std::size_t workers, std::ostream& out, std::ostream& err)
        : config(std::move(config)), run_dir(std::move(run_dir)), workers(workers), out(out), err(err) {}

    /// Backend commands must agree with the backend a run directory was
    /// started with, otherwise its artifacts would mix model outputs.
    Gateway& gateway() {
        if (!gateway_) {
            const auto pinned = read_manifest(run_dir).config;
            if (!pinned.sections.empty() &&
                serialize_toml(pinned) != serialize_toml(config_snapshot(config))) {
                throw Error(Errc::ValidationError,
                            "run directory was started with a different backend or models; see its run.toml",
                            run_dir.string());
            }
            gateway_ = std::make_unique<Gateway>(make_backend(config), gateway_options(config));
        }
        return *gateway_;
    }

    void ensure_run_dir() const { fs::create_directories(run_dir); }

    std::string in_run(const std::string& name) const { return (run_dir / name).string(); }

    std::string rel(const std::string& p) const { return relative_to(run_dir, p); }

    ArgList args() const { return ArgList(run_dir); }

    void record(Step step) const {
        ensure_run_dir();
        auto m = read_manifest(run_dir);
        if (m.config.sections.empty()) m.config = config_snapshot(config);
        m.record(std::move(step));
        write_manifest(run_dir, m);
    }

    void warn(std::vector<std::string>& sink, std::string message) const {
        err << "warning: " << message << "\n";
        sink.push_back(std::move(message));
    }

    const std::string& model_for(GeneratorType t) const {
        auto it = config.models.generators.find(t);
        if (it == config.models.generators.end() || it->second.empty()) {
            throw Error(Errc::InvalidArgument, "no model configured for " + std::string(display_name(t)));
        }
        return it->second;
    }

    RunConfig config;
    fs::path run_dir;
    std::size_t workers;
    std::ostream& out;
    std::ostream& err;

private:
    std::unique_ptr<Gateway> gateway_;
};

std::vector<GeneratedConcept> read_concept_files(const std::vector<std::string>& paths) {
    std::vector<GeneratedConcept> all;
    for (const auto& p : paths) {
        require_file(p, "concepts file");
        auto part = read_concepts(p);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

// ---- corpus ----------------------------------------------------------------

struct CorpusOpts {
    std::string corpus;
    std::string out;
    std::string train;
    std::string test;
    double fraction = 0.8;
    std::optional<std::uint64_t> seed;
};

std::string corpus_path(const Session& s, const std::string& given) {
    auto p = given.empty() ? s.config.paths.corpus : given;
    require_file(p, "corpus");
    return p;
}

int cmd_validate(Session& s, const CorpusOpts& o) {
    const auto corpus = load_corpus(corpus_path(s, o.corpus));
    s.out << "ok: " << corpus.size() << " records\n";
    return 0;
}

int cmd_stats(Session& s, const CorpusOpts& o) {
    const auto json = stats_to_json(corpus_stats(load_corpus(corpus_path(s, o.corpus))));
    if (o.out.empty()) {
        s.out << json;
    } else {
        write_file(o.out, json);
    }
    return 0;
}

int cmd_split(Session& s, const CorpusOpts& o) {
    const auto corpus = load_corpus(corpus_path(s, o.corpus));
    if (!(o.fraction > 0.0 && o.fraction < 1.0)) throw Error(Errc::InvalidArgument, "--fraction must be in (0, 1)");
    auto [train, test] = split_corpus(corpus, {o.fraction, o.seed.value_or(s.config.defaults.seed)});
    save_corpus(train, o.train);
    save_corpus(test, o.test);
    s.out << "train " << train.size() << ", test " << test.size() << "\n";
    return 0;
}

// ---- prepare / neggen / finetune ------------------------------------------

struct PrepareOpts {
    std::string role;
    std::string type;
    std::string pair;
    std::string corpus;
    std::string negatives;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool no_replacement = false;
};

int cmd_prepare(Session& s, const PrepareOpts& o) {
    const auto corpus_file = corpus_path(s, o.corpus);
    const auto corpus = load_corpus(corpus_file);
    auto args = s.args();
    args.opt("--role", o.role).path("--corpus", corpus_file);

    std::vector<TrainingExample> examples;
    std::vector<SkipReport> skipped;
    std::string name;
    ojson sidecar;
    sidecar["role"] = o.role;
    if (o.role == "generator" || o.role == "neggen") {
        GeneratorType type = GeneratorType::NegGen;
        if (o.role == "generator") {
            if (o.type.empty()) throw Error(Errc::InvalidArgument, "--type is required for generator datasets");
            type = parse_generator_type(o.type);
            if (type == GeneratorType::NegGen) throw Error(Errc::InvalidArgument, "use --role neggen for the NegGen dataset");
            args.opt("--type", std::string(to_string(type)));
        }
        auto ds = build_generator_dataset(corpus, type);
        examples = std::move(ds.examples);
        skipped = std::move(ds.skipped);
        name = std::string(to_string(type));
        sidecar["type"] = name;
    } else {
        if (o.pair.empty()) throw Error(Errc::InvalidArgument, "--pair is required for evaluator datasets");
        const auto pair = parse_evaluator_pair(o.pair);
        if (o.negatives.empty()) {
            throw Error(Errc::InvalidArgument,
                        "evaluator datasets need a negatives file; run `bidforge neggen` first and pass --negatives");
        }
        require_file(o.negatives, "negatives file");
        std::vector<std::string> pool;
        for (auto& n : read_negatives(o.negatives)) pool.push_back(std::move(n.text));
        const auto seed = o.seed.value_or(s.config.defaults.seed);
        auto ds = build_evaluator_dataset(corpus, pair, pool, seed, !o.no_replacement);
        for (const auto& ex : ds.examples) examples.push_back(to_training_example(ex));
        skipped = std::move(ds.skipped);
        name = std::string(to_string(pair));
        sidecar["pair"] = name;
        args.opt("--pair", name).path("--negatives", o.negatives).num("--seed", seed);
        if (o.no_replacement) args.flag("--no-replacement");
    }

    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("train-" + name + ".jsonl") : o.out;
    serialize_training_file(examples, out);
    const auto batch = compute_batch_size(examples.size());
    sidecar["training_file"] = fs::path(out).filename().string();
    sidecar["examples"] = examples.size();
    sidecar["batch_size"] = batch;
    sidecar["epochs"] = kDefaultEpochs;
    ojson skips = ojson::array();
    for (const auto& sk : skipped) skips.push_back({{"id", sk.record_id}, {"reason", sk.reason}});
    sidecar["skipped"] = skips;
    const auto sidecar_path = out + ".stats.json";
    write_file(sidecar_path, dump_pretty(sidecar));
    args.path("--out", out);

    Step step{"prepare", args.take(), {s.rel(out), s.rel(sidecar_path)}, {}};
    for (const auto& sk : skipped) step.warnings.push_back("skipped " + sk.record_id + ": " + sk.reason);
    s.record(std::move(step));
    s.out << "wrote " << examples.size() << " examples to " << out << " (batch size " << batch << ", "
          << skipped.size() << " skipped)\n";
    return 0;
}

struct NeggenOpts {
    std::string kind;
    std::string corpus;
    std::string exemplars;
    std::string model;
    std::string out;
};

int cmd_neggen(Session& s, const NeggenOpts& o) {
    const auto corpus_file = corpus_path(s, o.corpus);
    const auto corpus = load_corpus(corpus_file);
    const bool solution = o.kind == "solution";
    auto args = s.args();
    args.opt("--kind", o.kind).path("--corpus", corpus_file);

    std::vector<std::string> exemplars;
    std::string model = o.model;
    if (solution) {
        if (model.empty()) model = s.model_for(GeneratorType::NegGen);
    } else {
        const auto ex_path = o.exemplars.empty() ? s.config.paths.exemplars : o.exemplars;
        require_file(ex_path, "exemplars file");
        exemplars = read_exemplars(ex_path);
        if (model.empty()) model = s.config.models.base;
        args.path("--exemplars", ex_path);
    }
    if (model.empty()) throw Error(Errc::InvalidArgument, "no model configured for negative generation");
    args.opt("--model", model);

    SamplingParams sampling{s.config.defaults.temperature, s.config.defaults.max_tokens};
    std::vector<std::optional<std::string>> texts(corpus.size());
    std::vector<std::string> failures(corpus.size());
    auto& gw = s.gateway();
    parallel_for(corpus.size(), s.workers, [&](std::size_t i) {
        const auto& rec = corpus.records[i];
        auto req = solution ? negative_solution_request(model, rec.applications, sampling)
                            : negative_nonbio_request(model, exemplars, sampling);
        req.nonce = i;
        try {
            texts[i] = solution ? generate_negative_solution(gw, req) : generate_negative_nonbio(gw, req);
        } catch (const Error& e) {
            if (exit_code_for(e.code()) == 1) throw;
            failures[i] = e.what();
        }
    });

    std::vector<NegativeSample> negatives;
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (texts[i]) {
            negatives.push_back({corpus.records[i].id, *texts[i]});
        } else {
            s.warn(warnings, "no negative for " + corpus.records[i].id + ": " + failures[i]);
        }
    }
    if (negatives.empty()) throw Error(Errc::EmptyOutput, "no negative sample was generated");
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("negatives-" + o.kind + ".jsonl") : o.out;
    write_negatives(negatives, out);
    args.path("--out", out);
    s.record({"neggen", args.take(), {s.rel(out)}, warnings});
    s.out << "wrote " << negatives.size() << " negatives to " << out << "\n";
    return 0;
}

struct FinetuneOpts {
    std::string file;
    std::string base;
    std::optional<int> epochs;
    std::optional<int> batch;
    bool no_wait = false;
    int poll_seconds = 30;
};

int cmd_finetune(Session& s, const FinetuneOpts& o) {
    require_file(o.file, "training file");
    const auto base = o.base.empty() ? s.config.models.base : o.base;
    if (base.empty()) throw Error(Errc::InvalidArgument, "no base model given");
    auto& gw = s.gateway();
    auto job = gw.submit_fine_tune(o.file, base, o.epochs, o.batch);
    s.out << "submitted " << job.job_id << " (epochs " << job.epochs << ", batch size " << job.batch_size << ")\n";
    while (!o.no_wait && !job.status.terminal()) {
        std::this_thread::sleep_for(std::chrono::seconds(o.poll_seconds));
        job = gw.poll_job(job);
        s.out << job.job_id << ": " << to_string(job.status.state) << "\n";
    }

    ojson j;
    j["job_id"] = job.job_id;
    j["base_model"] = job.base_model;
    j["training_file"] = s.rel(o.file);
    j["epochs"] = job.epochs;
    j["batch_size"] = job.batch_size;
    j["state"] = to_string(job.status.state);
    j["model_id"] = job.status.model_id;
    if (!job.status.reason.empty()) j["reason"] = job.status.reason;
    s.ensure_run_dir();
    const auto out = s.in_run("finetune-" + job.job_id + ".json");
    write_file(out, dump_pretty(j));

    auto args = s.args();
    args.path("--file", o.file).opt("--base", base).num("--epochs", job.epochs).num("--batch", job.batch_size);
    if (o.no_wait) args.flag("--no-wait");
    std::vector<std::string> warnings;
    if (job.status.state == JobState::Failed) s.warn(warnings, "fine-tune failed: " + job.status.reason);
    s.record({"finetune", args.take(), {s.rel(out)}, warnings});
    if (job.status.state == JobState::Succeeded) s.out << "model " << job.status.model_id << "\n";
    return job.status.state == JobState::Failed ? 1 : 0;
}

// ---- generate / evaluate / report -----------------------------------------

struct GenerateOpts {
    std::string type;
    std::string applications;
    std::string benefits;
    std::string challenge;
    std::string challenge_file;
    std::size_t n = 50;
    std::string model;
    std::string run_id;
    std::optional<double> temperature;
    std::optional<int> max_tokens;
    std::string out;
};

int cmd_generate(Session& s, const GenerateOpts& o) {
    const auto type = parse_generator_type(o.type);
    if (type == GeneratorType::NegGen) throw Error(Errc::InvalidArgument, "generate takes --type 1, 2 or 3");
    std::vector<std::string> warnings;
    ProblemSpec spec;
    std::string challenge = o.challenge;
    if (!o.challenge_file.empty()) {
        if (!challenge.empty()) throw Error(Errc::InvalidArgument, "give --challenge or --challenge-file, not both");
        require_file(o.challenge_file, "challenge file");
        challenge = read_file(o.challenge_file);
    }
    const bool wants_apps = type != GeneratorType::Type3;
    const bool wants_benefits = type == GeneratorType::Type2;
    const bool wants_challenge = type == GeneratorType::Type3;
    if (wants_apps) {
        spec.applications = split_keywords(o.applications);
    } else if (!o.applications.empty()) {
        s.warn(warnings, "--applications is ignored for " + std::string(display_name(type)));
    }
    if (wants_benefits) {
        spec.benefits = split_keywords(o.benefits);
    } else if (!o.benefits.empty()) {
        s.warn(warnings, "--benefits is ignored for " + std::string(display_name(type)));
    }
    if (wants_challenge) {
        spec.challenge = normalize_paragraph(challenge);
    } else if (!challenge.empty()) {
        s.warn(warnings, "--challenge is ignored for " + std::string(display_name(type)));
    }
    assemble_prompt(spec, type); // throws MissingField before any request

    GenerationParams params;
    params.model_id = o.model.empty() ? s.model_for(type) : o.model;
    params.run_id = o.run_id.empty() ? std::string(to_string(type)) : o.run_id;
    params.sampling.temperature = o.temperature.value_or(s.config.defaults.temperature);
    params.sampling.max_tokens = o.max_tokens.value_or(s.config.defaults.max_tokens);
    params.retry_cap = s.config.defaults.retry_cap;
    params.workers = s.workers;

    auto result = generate_concepts(s.gateway(), spec, type, o.n, params);
    for (const auto& sk : result.skipped) {
        s.warn(warnings, "slot " + std::to_string(sk.slot) + " attempt " + std::to_string(sk.attempt) + ": " + sk.reason);
    }
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("concepts.jsonl") : o.out;
    write_concepts(result.concepts, out);

    auto args = s.args();
    args.opt("--type", std::string(to_string(type)));
    if (!spec.applications.empty()) args.opt("--applications", join(spec.applications, ", "));
    if (!spec.benefits.empty()) args.opt("--benefits", join(spec.benefits, ", "));
    if (!spec.challenge.empty()) args.opt("--challenge", spec.challenge);
    args.num("-n", o.n)
        .opt("--model", params.model_id)
        .opt("--run-id", params.run_id)
        .num("--temperature", params.sampling.temperature)
        .num("--max-tokens", params.sampling.max_tokens)
        .path("--out", out);
    s.record({"generate", args.take(), {s.rel(out)}, warnings});
    s.out << "generated " << result.concepts.size() << " of " << o.n << " concepts into " << out << "\n";
    return 0;
}

struct EvaluateOpts {
    std::vector<std::string> concepts;
    std::optional<double> threshold;
    std::string out;
};

void check_threshold(double t) {
    if (!(t >= 0.5 && t < 1.0)) throw Error(Errc::InvalidArgument, "threshold must be in [0.5, 1)");
}

int cmd_evaluate(Session& s, const EvaluateOpts& o) {
    auto files = o.concepts;
    if (files.empty()) files.push_back(s.in_run("concepts.jsonl"));
    const auto concepts = read_concept_files(files);
    if (concepts.empty()) throw Error(Errc::EmptyInput, "no concepts to evaluate");
    const double threshold = o.threshold.value_or(s.config.defaults.threshold);
    check_threshold(threshold);

    const auto evaluations =
        evaluate_concepts(s.gateway(), concepts, s.config.models.evaluators, threshold, s.workers);
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("evaluations.jsonl") : o.out;
    write_evaluations(evaluations, out);
    const auto table = aggregate_by_type(evaluations);
    const auto rates = s.in_run("passrates.json");
    write_file(rates, pass_rates_to_json(table));

    auto args = s.args();
    for (const auto& f : files) args.path("--concepts", f);
    args.num("--threshold", threshold).path("--out", out);
    s.record({"evaluate", args.take(), {s.rel(out), s.rel(rates)}, {}});
    s.out << render_pass_rates(table);
    return 0;
}

struct ReportOpts {
    std::optional<double> threshold;
};

int cmd_report(Session& s, const ReportOpts& o) {
    const auto path = s.in_run("evaluations.jsonl");
    std::error_code ec;
    if (!fs::exists(path, ec)) {
        throw Error(Errc::EmptyInput, "run directory has no evaluations; run `bidforge evaluate` first",
                    s.run_dir.string());
    }
    auto evaluations = read_evaluations(path);
    if (evaluations.empty()) throw Error(Errc::EmptyInput, "evaluations file is empty", path);
    auto args = s.args();
    if (o.threshold) {
        check_threshold(*o.threshold);
        for (auto& e : evaluations) apply_threshold(e, *o.threshold);
        args.num("--threshold", *o.threshold);
    }
    const auto table = aggregate_by_type(evaluations);
    const auto text = render_pass_rates(table);
    const auto report = s.in_run("report.txt");
    const auto rates = s.in_run("passrates.json");
    write_file(report, text);
    write_file(rates, pass_rates_to_json(table));
    s.record({"report", args.take(), {s.rel(report), s.rel(rates)}, {}});
    s.out << text;
    return 0;
}

// ---- diversity / categories ----------------------------------------------

struct DiversityOpts {
    std::vector<std::string> concepts;
    std::string reference;
    std::string reference_file;
    std::string reference_id;
    std::string corpus;
    std::string embeddings;
    std::string format;
    std::string stopwords;
    std::string out;
    bool csv = false;
};

int cmd_diversity(Session& s, const DiversityOpts& o) {
    auto files = o.concepts;
    if (files.empty()) files.push_back(s.in_run("concepts.jsonl"));
    const auto concepts = read_concept_files(files);
    auto args = s.args();
    for (const auto& f : files) args.path("--concepts", f);

    const int given = !o.reference.empty() + !o.reference_file.empty() + !o.reference_id.empty();
    if (given != 1) {
        throw Error(Errc::InvalidArgument, "give exactly one of --reference, --reference-file, --reference-id");
    }
    std::string reference = o.reference;
    if (!o.reference.empty()) {
        args.opt("--reference", o.reference);
    } else if (!o.reference_file.empty()) {
        require_file(o.reference_file, "reference file");
        reference = read_file(o.reference_file);
        args.path("--reference-file", o.reference_file);
    } else {
        const auto corpus_file = corpus_path(s, o.corpus);
        const auto corpus = load_corpus(corpus_file);
        auto it = std::find_if(corpus.records.begin(), corpus.records.end(),
                               [&](const InnovationRecord& r) { return r.id == o.reference_id; });
        if (it == corpus.records.end()) throw Error(Errc::InvalidArgument, "no such record", o.reference_id);
        reference = it->innovation;
        args.opt("--reference-id", o.reference_id).path("--corpus", corpus_file);
    }

    const auto emb_path = o.embeddings.empty() ? s.config.paths.embeddings : o.embeddings;
    require_file(emb_path, "embeddings file");
    const auto format_name = o.format.empty() ? s.config.paths.embeddings_format : o.format;
    std::vector<std::string> warnings;
    std::vector<std::string> load_warnings;
    const auto table = load_embeddings(emb_path, parse_embedding_format(format_name), &load_warnings);
    for (auto& w : load_warnings) s.warn(warnings, w);
    const auto sw_path = o.stopwords.empty() ? s.config.paths.stopwords : o.stopwords;
    StopwordSet stopwords;
    if (!sw_path.empty()) {
        require_file(sw_path, "stopwords file");
        stopwords = load_stopwords(sw_path);
        args.path("--stopwords", sw_path);
    }
    args.path("--embeddings", emb_path).opt("--format", format_name);

    const auto report = diversity_report(concepts, reference, table, stopwords, s.workers);
    for (const auto& id : report.skipped) s.warn(warnings, "skipped " + id + ": no in-vocabulary words");
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("diversity.json") : o.out;
    write_file(out, diversity_to_json(report));
    std::vector<std::string> outputs{s.rel(out)};
    args.path("--out", out);
    if (o.csv) {
        const auto csv = fs::path(out).replace_extension(".csv").string();
        write_file(csv, diversity_to_csv(report));
        outputs.push_back(s.rel(csv));
        args.flag("--csv");
    }
    s.record({"diversity", args.take(), outputs, warnings});

    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %5s %9s %9s %9s %9s\n", "type", "n", "mean", "median", "min", "max");
    s.out << buf;
    auto line = [&](const std::string& name, const DistributionSummary& d) {
        std::snprintf(buf, sizeof buf, "%-8s %5zu %9.4f %9.4f %9.4f %9.4f\n", name.c_str(), d.count, d.mean,
                      d.median, d.min, d.max);
        s.out << buf;
    };
    for (const auto& [t, d] : report.by_type) line(std::string(to_string(t)), d);
    line("all", report.summary);
    return 0;
}

struct CategoriesOpts {
    std::vector<std::string> concepts;
    std::string lexicon;
    std::string out;
};

int cmd_categories(Session& s, const CategoriesOpts& o) {
    auto files = o.concepts;
    if (files.empty()) files.push_back(s.in_run("concepts.jsonl"));
    const auto concepts = read_concept_files(files);
    const auto lex_path = o.lexicon.empty() ? s.config.paths.lexicon : o.lexicon;
    require_file(lex_path, "lexicon file");
    const auto lexicon = load_lexicon(lex_path);
    const auto shares = category_distribution(concepts, lexicon);

    ojson j = ojson::array();
    for (const auto& sh : shares) j.push_back({{"category", sh.category}, {"count", sh.count}, {"percent", sh.percent}});
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("categories.json") : o.out;
    write_file(out, dump_pretty(j));
    auto args = s.args();
    for (const auto& f : files) args.path("--concepts", f);
    args.path("--lexicon", lex_path).path("--out", out);
    s.record({"categories", args.take(), {s.rel(out)}, {}});
    s.out << render_category_distribution(shares);
    return 0;
}

// ---- survey ---------------------------------------------------------------

struct SurveyOpts {
    std::vector<std::string> concepts;
    std::string benchmarks;
    std::string responses;
    std::string key;
    std::string scores;
    std::string out;
};

std::string survey_key_path(const Session& s, const std::string& given) {
    return given.empty() ? s.in_run("survey.txt.key.json") : given;
}

int cmd_survey_export(Session& s, const SurveyOpts& o) {
    auto files = o.concepts;
    if (files.empty()) files.push_back(s.in_run("concepts.jsonl"));
    const auto concepts = read_concept_files(files);
    auto args = s.args();
    for (const auto& f : files) args.path("--concepts", f);
    std::vector<BenchmarkConcept> benchmarks;
    if (!o.benchmarks.empty()) {
        require_file(o.benchmarks, "benchmarks file");
        benchmarks = read_benchmarks(o.benchmarks);
        args.path("--benchmarks", o.benchmarks);
    }
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("survey.txt") : o.out;
    const auto key = export_survey(concepts, benchmarks, out);
    args.path("--out", out);
    s.record({"survey export", args.take(), {s.rel(out), s.rel(out + ".key.json")}, {}});
    s.out << "wrote " << key.items.size() << " survey items to " << out << "\n";
    return 0;
}

int cmd_survey_import(Session& s, const SurveyOpts& o) {
    if (o.responses.empty()) throw Error(Errc::InvalidArgument, "--responses is required");
    auto args = s.args();
    args.path("--responses", o.responses);
    const auto key_path = survey_key_path(s, o.key);
    std::optional<SurveyKey> key;
    std::error_code ec;
    if (fs::exists(key_path, ec)) {
        key = read_survey_key(key_path);
        args.path("--key", key_path);
    } else if (!o.key.empty()) {
        throw Error(Errc::MissingFile, "survey key not found", key_path);
    }
    const auto result = import_scores(o.responses, key ? &*key : nullptr);
    std::vector<std::string> warnings;
    for (const auto& r : result.rejections) {
        s.warn(warnings, "rejected response of " + r.rater_id + " (" + r.source + "): " +
                             (r.item.empty() ? std::string("no items") : r.item) + " " + r.reason);
    }
    std::string lines;
    for (const auto& r : result.records) {
        ojson j;
        j["concept_id"] = r.concept_id;
        j["rater_id"] = r.rater_id;
        j["feasibility"] = r.feasibility;
        j["novelty"] = r.novelty;
        lines += j.dump() + "\n";
    }
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("scores.jsonl") : o.out;
    write_file(out, lines);
    args.path("--out", out);
    s.record({"survey import", args.take(), {s.rel(out)}, warnings});
    s.out << result.usable_responses << " of " << result.responses << " responses usable, " << result.records.size()
          << " scores\n";
    return 0;
}

std::vector<ScoreRecord> read_scores(const std::string& path) {
    std::vector<ScoreRecord> out;
    std::size_t line_no = 0;
    std::stringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = ojson::parse(line);
            out.push_back({j.at("concept_id").get<std::string>(), j.at("rater_id").get<std::string>(),
                           j.at("feasibility").get<int>(), j.at("novelty").get<int>()});
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, std::string("scores: ") + e.what(), path, line_no);
        }
    }
    return out;
}

int cmd_survey_summarize(Session& s, const SurveyOpts& o) {
    const auto scores_path = o.scores.empty() ? s.in_run("scores.jsonl") : o.scores;
    require_file(scores_path, "scores file");
    const auto key_path = survey_key_path(s, o.key);
    require_file(key_path, "survey key");
    const auto summary = score_summary(read_scores(scores_path), read_survey_key(key_path).concept_index());
    s.ensure_run_dir();
    const auto out = o.out.empty() ? s.in_run("survey_summary.json") : o.out;
    write_file(out, score_summary_to_json(summary));
    auto args = s.args();
    args.path("--scores", scores_path).path("--key", key_path).path("--out", out);
    s.record({"survey summarize", args.take(), {s.rel(out)}, {}});
    s.out << render_score_summary(summary);
    return 0;
}

// ---- dispatch -------------------------------------------------------------

struct Globals {
    std::string config;
    std::string run_dir;
    std::optional<std::uint64_t> mock_seed;
    std::optional<int> workers;
};

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::optional<RunConfig>& forced_config);

struct ReplayOpts {
    std::string from;
};

int cmd_replay(Session& s, const ReplayOpts& o, std::ostream& out, std::ostream& err) {
    const fs::path from(o.from);
    std::error_code ec;
    if (!fs::exists(from / kManifestName, ec)) throw Error(Errc::MissingFile, "no manifest in run directory", o.from);
    const auto manifest = read_manifest(from);
    auto config = config_from_toml(manifest.config, fs::absolute(from).string(), default_data_dir());
    config.defaults = s.config.defaults;
    const auto target = fs::absolute(s.run_dir).lexically_normal();
    if (target == fs::absolute(from).lexically_normal()) {
        throw Error(Errc::InvalidArgument, "replay into a different run directory");
    }
    for (const auto& step : manifest.steps) {
        std::vector<std::string> argv{"--run-dir", target.string()};
        std::stringstream words(step.command);
        for (std::string w; words >> w;) argv.push_back(w);
        for (std::size_t i = 0; i < step.args.size(); ++i) {
            argv.push_back(step.args[i]);
            if (is_path_flag(step.args[i]) && i + 1 < step.args.size()) {
                const fs::path p(step.args[++i]);
                const bool outside = p.is_absolute() || (!p.empty() && *p.begin() == "..");
                argv.push_back(p.is_absolute() ? p.string()
                                               : ((outside ? fs::absolute(from) : target) / p).lexically_normal().string());
            }
        }
        out << "replaying " << step.command << "\n";
        if (int rc = run_impl(argv, out, err, config); rc != 0) return rc;
    }
    return 0;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::optional<RunConfig>& forced_config) {
    CLI::App app{"Bio-inspired design concept generation and evaluation", "bidforge"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "Config file (default: ./bidforge.toml when present)");
    app.add_option("--run-dir", g.run_dir, "Run directory for artifacts and the manifest");
    app.add_option("--mock-seed", g.mock_seed, "Seed for the mock backend");
    app.add_option("--workers", g.workers, "Concurrent requests")->check(CLI::PositiveNumber);

    CorpusOpts corpus_o;
    auto* validate = app.add_subcommand("validate", "Check a corpus file");
    validate->add_option("--corpus", corpus_o.corpus, "Corpus JSONL");
    auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
    stats->add_option("--corpus", corpus_o.corpus, "Corpus JSONL");
    stats->add_option("--out", corpus_o.out, "Output file (default: stdout)");
    auto* split = app.add_subcommand("split", "Seeded train/test split");
    split->add_option("--corpus", corpus_o.corpus, "Corpus JSONL");
    split->add_option("--train", corpus_o.train, "Train output")->required();
    split->add_option("--test", corpus_o.test, "Test output")->required();
    split->add_option("--fraction", corpus_o.fraction, "Train fraction")->capture_default_str();
    split->add_option("--seed", corpus_o.seed, "Shuffle seed");

    PrepareOpts prep_o;
    auto* prepare = app.add_subcommand("prepare", "Compile a fine-tuning dataset");
    prepare->add_option("--role", prep_o.role, "Dataset role")
        ->required()
        ->check(CLI::IsMember({"generator", "evaluator", "neggen"}));
    prepare->add_option("--type", prep_o.type, "Generator type 1, 2 or 3");
    prepare->add_option("--pair", prep_o.pair, "Evaluator pair: benefits, challenge or bio");
    prepare->add_option("--corpus", prep_o.corpus, "Corpus JSONL");
    prepare->add_option("--negatives", prep_o.negatives, "Negatives JSONL from `neggen`");
    prepare->add_option("--out", prep_o.out, "Training file");
    prepare->add_option("--seed", prep_o.seed, "Negative sampling seed");
    prepare->add_flag("--no-replacement", prep_o.no_replacement, "Fail instead of reusing negatives");

    NeggenOpts neg_o;
    auto* neggen = app.add_subcommand("neggen", "Generate negative innovation texts");
    neggen->add_option("--kind", neg_o.kind, "solution (problem-ignoring) or nonbio (biology-free)")
        ->required()
        ->check(CLI::IsMember({"solution", "nonbio"}));
    neggen->add_option("--corpus", neg_o.corpus, "Corpus JSONL");
    neggen->add_option("--exemplars", neg_o.exemplars, "Few-shot exemplars for nonbio");
    neggen->add_option("--model", neg_o.model, "Model id override");
    neggen->add_option("--out", neg_o.out, "Negatives JSONL");

    FinetuneOpts ft_o;
    auto* finetune = app.add_subcommand("finetune", "Submit a fine-tune job and wait for it");
    finetune->add_option("--file", ft_o.file, "Training file")->required();
    finetune->add_option("--base", ft_o.base, "Base model");
    finetune->add_option("--epochs", ft_o.epochs, "Epochs (default 4)")->check(CLI::PositiveNumber);
    finetune->add_option("--batch", ft_o.batch, "Batch size (default from example count)")->check(CLI::PositiveNumber);
    finetune->add_flag("--no-wait", ft_o.no_wait, "Return after submission");
    finetune->add_option("--poll-seconds", ft_o.poll_seconds, "Polling interval")->check(CLI::PositiveNumber);

    GenerateOpts gen_o;
    auto* generate = app.add_subcommand("generate", "Generate concepts for a problem");
    generate->add_option("--type", gen_o.type, "Generator type 1, 2 or 3")->required();
    generate->add_option("--applications", gen_o.applications, "Comma-separated applications");
    generate->add_option("--benefits", gen_o.benefits, "Comma-separated benefits");
    generate->add_option("--challenge", gen_o.challenge, "Challenge paragraph");
    generate->add_option("--challenge-file", gen_o.challenge_file, "File holding the challenge paragraph");
    generate->add_option("-n,--count", gen_o.n, "Number of concepts")->capture_default_str()->check(CLI::PositiveNumber);
    generate->add_option("--model", gen_o.model, "Model id override");
    generate->add_option("--run-id", gen_o.run_id, "Concept id prefix (default: the type name)");
    generate->add_option("--temperature", gen_o.temperature, "Sampling temperature");
    generate->add_option("--max-tokens", gen_o.max_tokens, "Completion length cap");
    generate->add_option("--out", gen_o.out, "Concepts JSONL");

    EvaluateOpts eval_o;
    auto* evaluate = app.add_subcommand("evaluate", "Classify concepts with the evaluator models");
    evaluate->add_option("--concepts", eval_o.concepts, "Concepts JSONL (repeatable)");
    evaluate->add_option("--threshold", eval_o.threshold, "Pass threshold in [0.5, 1)");
    evaluate->add_option("--out", eval_o.out, "Evaluations JSONL");

    ReportOpts rep_o;
    auto* report = app.add_subcommand("report", "Pass-rate table for a run directory");
    report->add_option("--threshold", rep_o.threshold, "Re-apply a different threshold");

    DiversityOpts div_o;
    auto* diversity = app.add_subcommand("diversity", "Word Mover's Distance to a reference innovation");
    diversity->add_option("--concepts", div_o.concepts, "Concepts JSONL (repeatable)");
    diversity->add_option("--reference", div_o.reference, "Reference innovation text");
    diversity->add_option("--reference-file", div_o.reference_file, "File holding the reference text");
    diversity->add_option("--reference-id", div_o.reference_id, "Corpus record whose innovation is the reference");
    diversity->add_option("--corpus", div_o.corpus, "Corpus for --reference-id");
    diversity->add_option("--embeddings", div_o.embeddings, "word2vec embeddings file");
    diversity->add_option("--format", div_o.format, "text or binary");
    diversity->add_option("--stopwords", div_o.stopwords, "Stopword list");
    diversity->add_option("--out", div_o.out, "Report JSON");
    diversity->add_flag("--csv", div_o.csv, "Also write raw distances as CSV");

    CategoriesOpts cat_o;
    auto* categories = app.add_subcommand("categories", "Biological source categories of concepts");
    categories->add_option("--concepts", cat_o.concepts, "Concepts JSONL (repeatable)");
    categories->add_option("--lexicon", cat_o.lexicon, "Category lexicon");
    categories->add_option("--out", cat_o.out, "Distribution JSON");

    SurveyOpts sv_o;
    auto* survey = app.add_subcommand("survey", "Feasibility and novelty survey");
    survey->require_subcommand(1);
    auto* sv_export = survey->add_subcommand("export", "Write a blind survey file and its key");
    sv_export->add_option("--concepts", sv_o.concepts, "Concepts JSONL (repeatable)");
    sv_export->add_option("--benchmarks", sv_o.benchmarks, "Benchmark concepts JSONL");
    sv_export->add_option("--out", sv_o.out, "Survey file");
    auto* sv_import = survey->add_subcommand("import", "Read filled-in survey responses");
    sv_import->add_option("--responses", sv_o.responses, "Response file or directory")->required();
    sv_import->add_option("--key", sv_o.key, "Survey key JSON");
    sv_import->add_option("--out", sv_o.out, "Scores JSONL");
    auto* sv_summarize = survey->add_subcommand("summarize", "Per-group score summary");
    sv_summarize->add_option("--scores", sv_o.scores, "Scores JSONL");
    sv_summarize->add_option("--key", sv_o.key, "Survey key JSON");
    sv_summarize->add_option("--out", sv_o.out, "Summary JSON");

    ReplayOpts rp_o;
    auto* replay = app.add_subcommand("replay", "Re-run every step of a run directory's manifest");
    replay->add_option("--from", rp_o.from, "Run directory to replay")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        const auto data_dir = default_data_dir();
        RunConfig config;
        if (forced_config) {
            config = *forced_config;
        } else if (!g.config.empty()) {
            require_file(g.config, "config file");
            config = load_config(g.config, data_dir);
        } else if (std::error_code ec; fs::exists("bidforge.toml", ec)) {
            config = load_config("bidforge.toml", data_dir);
        } else {
            config = default_config(data_dir);
        }
        if (g.mock_seed) config.mock_seed = *g.mock_seed;
        const auto run_dir = g.run_dir.empty() ? config.paths.run_dir : g.run_dir;
        const auto workers = static_cast<std::size_t>(g.workers.value_or(config.defaults.workers));
        Session s(config, run_dir, workers, out, err);

        if (*validate) return cmd_validate(s, corpus_o);
        if (*stats) return cmd_stats(s, corpus_o);
        if (*split) return cmd_split(s, corpus_o);
        if (*prepare) return cmd_prepare(s, prep_o);
        if (*neggen) return cmd_neggen(s, neg_o);
        if (*finetune) return cmd_finetune(s, ft_o);
        if (*generate) return cmd_generate(s, gen_o);
        if (*evaluate) return cmd_evaluate(s, eval_o);
        if (*report) return cmd_report(s, rep_o);
        if (*diversity) return cmd_diversity(s, div_o);
        if (*categories) return cmd_categories(s, cat_o);
        if (*sv_export) return cmd_survey_export(s, sv_o);
        if (*sv_import) return cmd_survey_import(s, sv_o);
        if (*sv_summarize) return cmd_survey_summarize(s, sv_o);
        if (*replay) return cmd_replay(s, rp_o, out, err);
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what();
        if (!e.subject().empty()) err << " [" << e.subject() << "]";
        if (e.position()) err << " at " << *e.position();
        err << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run_impl(args, out, err, std::nullopt);
}

} // namespace bidforge::cli
