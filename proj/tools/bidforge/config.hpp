// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "toml_lite.hpp"

#include "bidforge/domain.hpp"
#include "bidforge/llm_gateway.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace bidforge::cli {

enum class BackendKind { Mock, Remote };

struct ModelIds {
    std::map<GeneratorType, std::string> generators; // Type1..3 and NegGen
    std::string base;
    std::map<EvaluatorPair, std::string> evaluators;
};

struct Defaults {
    double temperature = 0.8;
    int max_tokens = 400;
    double threshold = 0.5;
    std::uint64_t seed = 42;
    int workers = 8;
    int retry_cap = 3;
    double requests_per_minute = 600.0;
    int max_in_flight = 8;
};

/// Paths are stored absolute (resolved against the config file's folder).
struct Paths {
    std::string corpus;
    std::string embeddings;
    std::string embeddings_format = "text";
    std::string stopwords;
    std::string lexicon;
    std::string exemplars;
    std::string run_dir;
};

struct RunConfig {
    BackendKind backend = BackendKind::Mock;
    std::uint64_t mock_seed = 0;
    std::string base_url;
    ModelIds models;
    Defaults defaults;
    Paths paths;
};

/// Mock backend, mock-* model ids and the shipped data files.
RunConfig default_config(const std::string& data_dir);

/// Layers `doc` over default_config. Throws ValidationError for unknown
/// keys, a credential in the file, or a backend other than mock/remote, and
/// MissingFile for a configured input path that does not exist.
RunConfig config_from_toml(const TomlDocument& doc, const std::string& base_dir,
                           const std::string& data_dir);

RunConfig load_config(const std::string& path, const std::string& data_dir);

/// The backend and model fields only; this is what a manifest keeps so a
/// replay talks to the same models.
TomlDocument config_snapshot(const RunConfig& config);

std::shared_ptr<CompletionBackend> make_backend(const RunConfig& config);
GatewayOptions gateway_options(const RunConfig& config);

} // namespace bidforge::cli
