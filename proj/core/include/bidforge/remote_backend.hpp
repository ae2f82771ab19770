// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/llm_gateway.hpp"

#include <chrono>
#include <string>

namespace bidforge {

inline constexpr const char* kApiKeyEnv = "BIDFORGE_API_KEY";

struct RemoteOptions {
    /// e.g. "https://api.openai.com/v1"; any path component is used as the
    /// endpoint prefix.
    std::string base_url;
    std::string api_key;
    std::chrono::seconds timeout{60};
};

/// Client for completion-style HTTP APIs:
///   POST {prefix}/completions
///   POST {prefix}/files            (multipart, purpose=fine-tune)
///   POST {prefix}/fine-tunes
///   GET  {prefix}/fine-tunes/{id}
/// HTTP 429 maps to RateLimited (honouring Retry-After), 404 to
/// ModelNotFound / UnknownJob, transport failures and 5xx to
/// BackendUnavailable.
class RemoteBackend : public CompletionBackend {
public:
    explicit RemoteBackend(RemoteOptions options);
    ~RemoteBackend() override;

    std::string name() const override { return "remote"; }
    std::vector<CompletionChoice> complete(const CompletionRequest& request) override;
    CreatedJob create_fine_tune(const FineTuneRequest& request) override;
    JobStatus retrieve_fine_tune(const std::string& job_id) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Reads BIDFORGE_API_KEY; empty string when unset.
std::string api_key_from_env();

} // namespace bidforge
