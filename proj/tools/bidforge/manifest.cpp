// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "manifest.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

#include <algorithm>
#include <array>

namespace bidforge::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 17> kPathFlags = {
    "--corpus",    "--out",        "--negatives",      "--file",      "--concepts",  "--embeddings",
    "--stopwords", "--lexicon",    "--exemplars",      "--reference-file", "--benchmarks", "--responses",
    "--key",       "--scores",     "--challenge-file", "--train",     "--test",
};

std::vector<std::string> string_list(const TomlSection& sec, std::string_view key) {
    const auto* v = sec.find(key);
    if (!v) return {};
    if (const auto* list = std::get_if<std::vector<std::string>>(v)) return *list;
    throw Error(Errc::ParseError, "expected a string array", "[" + sec.name + "] " + std::string(key));
}

} // namespace

void Manifest::record(Step step) {
    for (auto& s : steps) {
        if (s.command == step.command && s.args == step.args) {
            s = std::move(step);
            return;
        }
    }
    steps.push_back(std::move(step));
}

bool is_path_flag(std::string_view flag) {
    return std::find(kPathFlags.begin(), kPathFlags.end(), flag) != kPathFlags.end();
}

std::string relative_to(const fs::path& run_dir, const fs::path& p) {
    const auto abs_run = fs::absolute(run_dir).lexically_normal();
    const auto abs_p = fs::absolute(p).lexically_normal();
    auto rel = abs_p.lexically_relative(abs_run);
    // Up to one level out (a sibling of the run directory) stays relative;
    // anything further is recorded absolute.
    std::size_t ups = 0;
    for (const auto& part : rel) ups += part == "..";
    if (rel.empty() || ups > 1) return abs_p.generic_string();
    return rel.generic_string();
}

std::string serialize_manifest(const Manifest& manifest) {
    TomlDocument doc = manifest.config;
    for (std::size_t i = 0; i < manifest.steps.size(); ++i) {
        const auto& s = manifest.steps[i];
        auto& sec = doc.section("step." + std::to_string(i + 1));
        sec.set("command", s.command);
        sec.set("args", s.args);
        sec.set("outputs", s.outputs);
        sec.set("warnings", s.warnings);
    }
    return serialize_toml(doc);
}

Manifest read_manifest(const fs::path& run_dir) {
    Manifest m;
    const auto path = run_dir / kManifestName;
    std::error_code ec;
    if (!fs::exists(path, ec)) return m;
    const auto doc = parse_toml(read_file(path.string()), path.string());
    for (const auto& sec : doc.sections) {
        if (sec.name.rfind("step.", 0) == 0) {
            Step s;
            const auto* cmd = sec.find("command");
            if (!cmd || !std::holds_alternative<std::string>(*cmd)) {
                throw Error(Errc::ParseError, "step without a command", "[" + sec.name + "]");
            }
            s.command = std::get<std::string>(*cmd);
            s.args = string_list(sec, "args");
            s.outputs = string_list(sec, "outputs");
            s.warnings = string_list(sec, "warnings");
            m.steps.push_back(std::move(s));
        } else {
            m.config.sections.push_back(sec);
        }
    }
    return m;
}

void write_manifest(const fs::path& run_dir, const Manifest& manifest) {
    write_file((run_dir / kManifestName).string(), serialize_manifest(manifest));
}

} // namespace bidforge::cli
