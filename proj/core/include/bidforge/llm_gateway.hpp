// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/domain.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bidforge {

struct CompletionRequest {
    std::string model_id;
    std::string prompt;
    int max_tokens = 400;
    double temperature = 0.8;
    std::vector<std::string> stop;
    int n = 1;
    /// Number of top log-probabilities to return for the first token; 0 = none.
    int logprobs = 0;
    /// Sampling salt. The mock mixes it into its seed so retries of the same
    /// prompt can differ; remote backends ignore it.
    std::uint64_t nonce = 0;
};

struct CompletionChoice {
    std::string text;
    std::map<std::string, double> first_token_logprobs;
};

enum class JobState { Pending, Running, Succeeded, Failed };

struct JobStatus {
    JobState state = JobState::Pending;
    std::string model_id; // set when Succeeded
    std::string reason;   // set when Failed

    bool terminal() const noexcept {
        return state == JobState::Succeeded || state == JobState::Failed;
    }
    bool operator==(const JobStatus&) const = default;
};

std::string_view to_string(JobState s) noexcept;

/// Throws InvalidArgument if moving from `from` to `to` would go backwards
/// (Pending -> Running -> {Succeeded, Failed}; terminal states are final).
void check_transition(const JobStatus& from, const JobStatus& to);

struct FineTuneJob {
    std::string job_id;
    std::string base_model;
    std::string training_file;
    int epochs = 4;
    int batch_size = 1;
    JobStatus status;
};

struct FineTuneRequest {
    std::string training_file;
    std::string file_contents;
    std::string base_model;
    int epochs = 4;
    int batch_size = 1;
    std::string idempotency_key;
};

struct CreatedJob {
    std::string job_id;
    JobStatus status;
};

/// Transport to a completion-style service. Implementations throw
/// bidforge::Error with BackendUnavailable, RateLimited, ModelNotFound or
/// UnknownJob.
class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;

    virtual std::string name() const = 0;
    virtual std::vector<CompletionChoice> complete(const CompletionRequest& request) = 0;
    virtual CreatedJob create_fine_tune(const FineTuneRequest& request) = 0;
    virtual JobStatus retrieve_fine_tune(const std::string& job_id) = 0;
};

/// Classic token bucket. `rate_per_minute <= 0` disables limiting.
class TokenBucket {
public:
    using Clock = std::chrono::steady_clock;

    TokenBucket(double rate_per_minute, double burst,
                std::function<Clock::time_point()> now = [] { return Clock::now(); },
                std::function<void(Clock::duration)> sleep = nullptr);

    /// Blocks until a token is available, then consumes it.
    void acquire();
    /// Consumes a token if one is available right now.
    bool try_acquire();

private:
    void refill_locked();

    double rate_per_sec_;
    double burst_;
    double tokens_;
    Clock::time_point last_;
    std::function<Clock::time_point()> now_;
    std::function<void(Clock::duration)> sleep_;
    std::mutex mu_;
};

struct GatewayOptions {
    double requests_per_minute = 600.0;
    int max_in_flight = 8;
    int max_retries = 5;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{30000};
    /// Replaces std::this_thread::sleep_for; tests use it to observe backoff.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct Verdict {
    EvaluatorPair pair = EvaluatorPair::BioInnovation;
    Label label = Label::Related;
    double confidence = 0.5;
};

/// confidence = p(chosen) / (p(related) + p(unrelated)); ties go to Related.
Verdict verdict_from_probabilities(EvaluatorPair pair, double p_related, double p_unrelated);

/// Cuts at the earliest occurrence of any stop sequence (stop excluded).
std::string truncate_at_stop(std::string text, const std::vector<std::string>& stop);

/// Checks that every non-blank line holds an object with string `prompt` and
/// `completion`; returns the example count. Throws InvalidTrainingFile with
/// the 1-based line number.
std::size_t validate_training_file(std::string_view contents);

/// Shared, thread-safe front door to a backend: rate limiting, an in-flight
/// cap, exponential backoff on RateLimited, stop-sequence truncation and
/// idempotent fine-tune submission.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<CompletionBackend> backend, GatewayOptions options = {});
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    CompletionBackend& backend() noexcept { return *backend_; }

    /// Returns `request.n` texts, each truncated at the first stop sequence.
    std::vector<std::string> complete(const CompletionRequest& request);

    /// Same as complete() but keeps the log-probabilities.
    std::vector<CompletionChoice> complete_choices(const CompletionRequest& request);

    /// Defaults: epochs = 4, batch size = compute_batch_size(example count).
    /// Resubmitting the same file contents and hyperparameters returns the
    /// job created first instead of creating another one.
    FineTuneJob submit_fine_tune(const std::string& training_file, const std::string& base_model,
                                 std::optional<int> epochs = std::nullopt,
                                 std::optional<int> batch_size = std::nullopt);

    FineTuneJob poll_job(const FineTuneJob& job);

    /// One-token completion over the two label tokens.
    Verdict classify(const std::string& model_id, const std::string& marked_text,
                     EvaluatorPair pair);

private:
    template <typename Fn>
    auto with_retries(Fn&& fn) -> decltype(fn());

    void sleep_for(std::chrono::milliseconds d);

    std::shared_ptr<CompletionBackend> backend_;
    GatewayOptions options_;
    TokenBucket bucket_;

    std::mutex inflight_mu_;
    std::condition_variable inflight_cv_;
    int inflight_ = 0;

    std::mutex finetune_mu_;
    std::map<std::string, FineTuneJob> submitted_;
};

} // namespace bidforge
