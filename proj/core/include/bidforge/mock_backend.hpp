// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/llm_gateway.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

namespace bidforge {

/// What a mock model id behaves like. Ids are resolved by prefix:
/// "mock-gen*" -> Generator, "mock-neggen*" -> NegGen, "mock-cls*" ->
/// Classifier, "mock-base*" and the stock base names (davinci, curie,
/// babbage, ada) -> Base.
enum class MockRole { Generator, NegGen, Classifier, Base };

std::optional<MockRole> mock_role_of(std::string_view model_id);

/// Offline backend whose every output is a pure function of
/// (model id, prompt, choice index, nonce, seed). Generators assemble
/// well-formed [Bio]/[Inno] blocks from a fixed template bank; classifiers
/// score lexical overlap between the two marked blocks. Fine-tuning
/// "succeeds" immediately with a model id derived from the file hash, and job
/// ids encode their own result so polling works across process restarts.
class MockBackend : public CompletionBackend {
public:
    explicit MockBackend(std::uint64_t seed = 0);

    std::string name() const override { return "mock"; }
    std::vector<CompletionChoice> complete(const CompletionRequest& request) override;
    CreatedJob create_fine_tune(const FineTuneRequest& request) override;
    JobStatus retrieve_fine_tune(const std::string& job_id) override;

    /// Pins the classifier output for an exact prompt (marked text plus
    /// separator), overriding the overlap heuristic.
    void script_probabilities(const std::string& prompt, double p_related, double p_unrelated);

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::string generate_concept(const std::string& prompt, std::uint64_t stream) const;
    std::string generate_negative(const std::string& prompt, std::uint64_t stream) const;
    std::string generate_free_text(const std::string& prompt, std::uint64_t stream) const;
    CompletionChoice classify(const std::string& prompt, std::uint64_t stream) const;

    std::uint64_t seed_;
    mutable std::mutex mu_;
    std::map<std::string, std::pair<double, double>> scripted_;
};

} // namespace bidforge
