// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "config.hpp"

#include "bidforge/error.hpp"
#include "bidforge/mock_backend.hpp"
#include "bidforge/remote_backend.hpp"
#include "bidforge/text.hpp"

#include <array>
#include <filesystem>
#include <set>

namespace bidforge::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array kGeneratorTypes = {GeneratorType::Type1, GeneratorType::Type2, GeneratorType::Type3,
                                        GeneratorType::NegGen};

[[noreturn]] void bad_key(const std::string& section, const std::string& key, const std::string& why) {
    throw Error(Errc::ValidationError, why, "[" + section + "] " + key);
}

std::string as_string(const std::string& sec, const std::string& key, const TomlValue& v) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    bad_key(sec, key, "expected a string");
}

double as_double(const std::string& sec, const std::string& key, const TomlValue& v) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    bad_key(sec, key, "expected a number");
}

std::int64_t as_int(const std::string& sec, const std::string& key, const TomlValue& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    bad_key(sec, key, "expected an integer");
}

int as_positive_int(const std::string& sec, const std::string& key, const TomlValue& v) {
    const auto i = as_int(sec, key, v);
    if (i < 1 || i > 1'000'000) bad_key(sec, key, "expected a positive integer");
    return static_cast<int>(i);
}

// Matches whole words of the key, so max_tokens is fine but api_key is not.
bool is_secret(const std::string& key) {
    static const std::set<std::string, std::less<>> words = {
        "key", "apikey", "token", "secret", "password", "passwd", "credential", "credentials"};
    const auto k = to_lower(key);
    std::size_t b = 0;
    while (b <= k.size()) {
        auto e = k.find_first_of("_-.", b);
        if (e == std::string::npos) e = k.size();
        if (words.contains(std::string_view(k).substr(b, e - b))) return true;
        b = e + 1;
    }
    return false;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    if (path.is_relative()) path = fs::path(base_dir) / path;
    return path.lexically_normal().string();
}

} // namespace

RunConfig default_config(const std::string& data_dir) {
    RunConfig c;
    c.models.generators = {{GeneratorType::Type1, "mock-gen-type1"},
                           {GeneratorType::Type2, "mock-gen-type2"},
                           {GeneratorType::Type3, "mock-gen-type3"},
                           {GeneratorType::NegGen, "mock-neggen"}};
    c.models.base = "mock-base";
    c.models.evaluators = {{EvaluatorPair::BenefitsInnovation, "mock-cls-benefits"},
                           {EvaluatorPair::ChallengeInnovation, "mock-cls-challenge"},
                           {EvaluatorPair::BioInnovation, "mock-cls-bio"}};
    if (!data_dir.empty()) {
        const fs::path d(data_dir);
        c.paths.stopwords = (d / "stopwords.txt").string();
        c.paths.lexicon = (d / "bio_lexicon.txt").string();
        c.paths.exemplars = (d / "nonbio_exemplars.txt").string();
    }
    c.paths.run_dir = "run";
    return c;
}

RunConfig config_from_toml(const TomlDocument& doc, const std::string& base_dir, const std::string& data_dir) {
    RunConfig c = default_config(data_dir);
    bool remote_models = false;
    for (const auto& sec : doc.sections) {
        for (const auto& [key, value] : sec.entries) {
            if (is_secret(key)) {
                bad_key(sec.name, key, std::string("credentials are read from ") + kApiKeyEnv + ", not the config file");
            }
            if (sec.name == "" || sec.name == "backend") {
                if (key == "backend" || key == "kind") {
                    const auto v = to_lower(as_string(sec.name, key, value));
                    if (v == "mock") {
                        c.backend = BackendKind::Mock;
                    } else if (v == "remote") {
                        c.backend = BackendKind::Remote;
                    } else {
                        bad_key(sec.name, key, "backend must be \"mock\" or \"remote\"");
                    }
                } else if (key == "mock_seed") {
                    c.mock_seed = static_cast<std::uint64_t>(as_int(sec.name, key, value));
                } else if (key == "base_url") {
                    c.base_url = as_string(sec.name, key, value);
                } else {
                    bad_key(sec.name, key, "unknown key");
                }
            } else if (sec.name == "models") {
                const auto id = as_string(sec.name, key, value);
                remote_models = true;
                if (key == "base") {
                    c.models.base = id;
                    continue;
                }
                bool matched = false;
                for (auto t : kGeneratorTypes) {
                    if (key == to_string(t)) {
                        c.models.generators[t] = id;
                        matched = true;
                    }
                }
                for (auto p : kAllPairs) {
                    if (key == to_string(p)) {
                        c.models.evaluators[p] = id;
                        matched = true;
                    }
                }
                if (!matched) bad_key(sec.name, key, "unknown model role");
            } else if (sec.name == "defaults") {
                auto& d = c.defaults;
                if (key == "temperature") {
                    d.temperature = as_double(sec.name, key, value);
                    if (d.temperature < 0.0 || d.temperature > 2.0) bad_key(sec.name, key, "expected 0..2");
                } else if (key == "max_tokens") {
                    d.max_tokens = as_positive_int(sec.name, key, value);
                } else if (key == "threshold") {
                    d.threshold = as_double(sec.name, key, value);
                    if (d.threshold < 0.5 || d.threshold >= 1.0) bad_key(sec.name, key, "expected [0.5, 1)");
                } else if (key == "seed") {
                    d.seed = static_cast<std::uint64_t>(as_int(sec.name, key, value));
                } else if (key == "workers") {
                    d.workers = as_positive_int(sec.name, key, value);
                } else if (key == "retry_cap") {
                    const auto r = as_int(sec.name, key, value);
                    if (r < 0 || r > 100) bad_key(sec.name, key, "expected 0..100");
                    d.retry_cap = static_cast<int>(r);
                } else if (key == "requests_per_minute") {
                    d.requests_per_minute = as_double(sec.name, key, value);
                } else if (key == "max_in_flight") {
                    d.max_in_flight = as_positive_int(sec.name, key, value);
                } else {
                    bad_key(sec.name, key, "unknown key");
                }
            } else if (sec.name == "paths") {
                auto v = as_string(sec.name, key, value);
                auto& p = c.paths;
                if (key == "embeddings_format") {
                    p.embeddings_format = to_lower(v);
                    continue;
                }
                v = resolve(base_dir, v);
                if (key == "corpus") {
                    p.corpus = v;
                } else if (key == "embeddings") {
                    p.embeddings = v;
                } else if (key == "stopwords") {
                    p.stopwords = v;
                } else if (key == "lexicon") {
                    p.lexicon = v;
                } else if (key == "exemplars") {
                    p.exemplars = v;
                } else if (key == "run_dir") {
                    p.run_dir = v;
                    continue;
                } else {
                    bad_key(sec.name, key, "unknown key");
                }
                std::error_code ec;
                if (!fs::exists(v, ec)) throw Error(Errc::MissingFile, "configured path does not exist", v);
            } else {
                throw Error(Errc::ValidationError, "unknown section", "[" + sec.name + "]");
            }
        }
    }
    if (c.backend == BackendKind::Remote) {
        if (c.base_url.empty()) throw Error(Errc::ValidationError, "the remote backend needs base_url");
        if (!remote_models) {
            throw Error(Errc::ValidationError, "the remote backend needs a [models] section");
        }
    }
    return c;
}

RunConfig load_config(const std::string& path, const std::string& data_dir) {
    const auto doc = parse_toml(read_file(path), path);
    const auto base = fs::absolute(fs::path(path)).parent_path().string();
    return config_from_toml(doc, base, data_dir);
}

TomlDocument config_snapshot(const RunConfig& config) {
    TomlDocument doc;
    auto& b = doc.section("backend");
    b.set("kind", std::string(config.backend == BackendKind::Mock ? "mock" : "remote"));
    if (config.backend == BackendKind::Mock) {
        b.set("mock_seed", static_cast<std::int64_t>(config.mock_seed));
    } else {
        b.set("base_url", config.base_url);
    }
    auto& m = doc.section("models");
    for (const auto& [t, id] : config.models.generators) m.set(std::string(to_string(t)), id);
    m.set("base", config.models.base);
    for (const auto& [p, id] : config.models.evaluators) m.set(std::string(to_string(p)), id);
    return doc;
}

std::shared_ptr<CompletionBackend> make_backend(const RunConfig& config) {
    if (config.backend == BackendKind::Mock) return std::make_shared<MockBackend>(config.mock_seed);
    return std::make_shared<RemoteBackend>(RemoteOptions{config.base_url, api_key_from_env(), std::chrono::seconds(60)});
}

GatewayOptions gateway_options(const RunConfig& config) {
    GatewayOptions o;
    o.requests_per_minute = config.backend == BackendKind::Mock ? 0.0 : config.defaults.requests_per_minute;
    o.max_in_flight = config.defaults.max_in_flight;
    return o;
}

} // namespace bidforge::cli
