// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "config.hpp"
#include "toml_lite.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bidforge::cli {

inline constexpr const char* kManifestName = "run.toml";

/// One command invocation. `args` is the canonical argument list with every
/// default resolved and every path relative to the run directory, so it can
/// be replayed as-is.
struct Step {
    std::string command;
    std::vector<std::string> args;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
};

struct Manifest {
    TomlDocument config; // [backend] and [models]
    std::vector<Step> steps;

    /// Replaces a step with the same command and args, else appends.
    void record(Step step);
};

Manifest read_manifest(const std::filesystem::path& run_dir);
void write_manifest(const std::filesystem::path& run_dir, const Manifest& manifest);
std::string serialize_manifest(const Manifest& manifest);

/// Flags whose value is a file or directory path.
bool is_path_flag(std::string_view flag);

/// Path as recorded in a manifest: relative to `run_dir`, generic separators.
std::string relative_to(const std::filesystem::path& run_dir, const std::filesystem::path& p);

} // namespace bidforge::cli
