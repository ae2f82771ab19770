// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/llm_gateway.hpp"

#include "bidforge/error.hpp"
#include "bidforge/markup.hpp"
#include "bidforge/prompt_forge.hpp"
#include "bidforge/text.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace bidforge {

std::string_view to_string(JobState s) noexcept {
    switch (s) {
    case JobState::Pending: return "pending";
    case JobState::Running: return "running";
    case JobState::Succeeded: return "succeeded";
    case JobState::Failed: return "failed";
    }
    return "";
}

void check_transition(const JobStatus& from, const JobStatus& to) {
    auto rank = [](JobState s) {
        switch (s) {
        case JobState::Pending: return 0;
        case JobState::Running: return 1;
        default: return 2;
        }
    };
    const bool ok = from.terminal() ? from == to : rank(to.state) >= rank(from.state);
    if (!ok) {
        throw Error(Errc::InvalidArgument, "job status cannot move from " +
                                               std::string(to_string(from.state)) + " to " +
                                               std::string(to_string(to.state)));
    }
}

// --- TokenBucket ----------------------------------------------------------

TokenBucket::TokenBucket(double rate_per_minute, double burst,
                         std::function<Clock::time_point()> now,
                         std::function<void(Clock::duration)> sleep)
    : rate_per_sec_(rate_per_minute / 60.0),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      now_(std::move(now)),
      sleep_(std::move(sleep)) {
    last_ = now_();
    if (!sleep_) sleep_ = [](Clock::duration d) { std::this_thread::sleep_for(d); };
}

void TokenBucket::refill_locked() {
    const auto t = now_();
    const std::chrono::duration<double> dt = t - last_;
    last_ = t;
    tokens_ = std::min(burst_, tokens_ + dt.count() * rate_per_sec_);
}

bool TokenBucket::try_acquire() {
    if (rate_per_sec_ <= 0.0) return true;
    std::lock_guard lock(mu_);
    refill_locked();
    if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return true;
    }
    return false;
}

void TokenBucket::acquire() {
    if (rate_per_sec_ <= 0.0) return;
    while (true) {
        Clock::duration wait{};
        {
            std::lock_guard lock(mu_);
            refill_locked();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            wait = std::chrono::duration_cast<Clock::duration>(
                std::chrono::duration<double>((1.0 - tokens_) / rate_per_sec_));
        }
        sleep_(std::max(wait, Clock::duration(1)));
    }
}

// --- free helpers ---------------------------------------------------------

Verdict verdict_from_probabilities(EvaluatorPair pair, double p_related, double p_unrelated) {
    if (!(p_related >= 0.0) || !(p_unrelated >= 0.0) || p_related + p_unrelated <= 0.0) {
        throw Error(Errc::InvalidArgument, "label probabilities must be non-negative, not both zero");
    }
    Verdict v;
    v.pair = pair;
    v.label = p_related >= p_unrelated ? Label::Related : Label::Unrelated;
    const double chosen = v.label == Label::Related ? p_related : p_unrelated;
    v.confidence = chosen / (p_related + p_unrelated);
    return v;
}

std::string truncate_at_stop(std::string text, const std::vector<std::string>& stop) {
    std::size_t cut = std::string::npos;
    for (const auto& s : stop) {
        if (s.empty()) continue;
        cut = std::min(cut, text.find(s));
    }
    if (cut != std::string::npos) text.resize(cut);
    return text;
}

std::size_t validate_training_file(std::string_view contents) {
    std::size_t count = 0;
    detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
        auto bad = [&](const std::string& why) {
            throw Error(Errc::InvalidTrainingFile,
                        "line " + std::to_string(line_no) + ": " + why, {}, line_no);
        };
        detail::ojson j;
        try {
            j = detail::ojson::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            bad("not valid JSON");
        }
        if (!j.is_object()) bad("not an object");
        for (const char* key : {"prompt", "completion"}) {
            const auto it = j.find(key);
            if (it == j.end() || !it->is_string()) bad(std::string("missing string '") + key + "'");
        }
        ++count;
    });
    if (count == 0) throw Error(Errc::InvalidTrainingFile, "training file has no examples", {}, 0);
    return count;
}

// --- Gateway --------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<CompletionBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      bucket_(options_.requests_per_minute, std::max(1, options_.max_in_flight)) {
    if (!backend_) throw Error(Errc::InvalidArgument, "gateway needs a backend");
    if (options_.max_in_flight < 1) options_.max_in_flight = 1;
}

Gateway::~Gateway() = default;

void Gateway::sleep_for(std::chrono::milliseconds d) {
    if (options_.sleep) {
        options_.sleep(d);
    } else {
        std::this_thread::sleep_for(d);
    }
}

template <typename Fn>
auto Gateway::with_retries(Fn&& fn) -> decltype(fn()) {
    for (int attempt = 0;; ++attempt) {
        {
            std::unique_lock lock(inflight_mu_);
            inflight_cv_.wait(lock, [&] { return inflight_ < options_.max_in_flight; });
            ++inflight_;
        }
        struct Release {
            Gateway* g;
            ~Release() {
                {
                    std::lock_guard lock(g->inflight_mu_);
                    --g->inflight_;
                }
                g->inflight_cv_.notify_one();
            }
        };
        try {
            Release release{this};
            bucket_.acquire();
            return fn();
        } catch (const Error& e) {
            if (e.code() != Errc::RateLimited || attempt >= options_.max_retries) throw;
            auto delay = options_.backoff_base * (1LL << std::min(attempt, 20));
            if (e.retry_after()) {
                delay = std::max<std::chrono::milliseconds>(delay, std::chrono::milliseconds(
                                            static_cast<long long>(*e.retry_after() * 1000.0)));
            }
            sleep_for(std::min<std::chrono::milliseconds>(delay, options_.backoff_cap));
        }
    }
}

std::vector<CompletionChoice> Gateway::complete_choices(const CompletionRequest& request) {
    if (request.n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
    if (request.max_tokens < 1) throw Error(Errc::InvalidArgument, "max_tokens must be >= 1");
    if (!(request.temperature >= 0.0)) throw Error(Errc::InvalidArgument, "temperature must be >= 0");
    auto choices = with_retries([&] { return backend_->complete(request); });
    if (choices.size() != static_cast<std::size_t>(request.n)) {
        throw Error(Errc::BackendUnavailable,
                    "backend returned " + std::to_string(choices.size()) + " choices, expected " +
                        std::to_string(request.n));
    }
    for (auto& c : choices) c.text = truncate_at_stop(std::move(c.text), request.stop);
    return choices;
}

std::vector<std::string> Gateway::complete(const CompletionRequest& request) {
    auto choices = complete_choices(request);
    std::vector<std::string> texts;
    texts.reserve(choices.size());
    for (auto& c : choices) texts.push_back(std::move(c.text));
    return texts;
}

FineTuneJob Gateway::submit_fine_tune(const std::string& training_file,
                                      const std::string& base_model, std::optional<int> epochs,
                                      std::optional<int> batch_size) {
    const auto contents = read_file(training_file);
    const auto examples = validate_training_file(contents);

    FineTuneRequest req;
    req.training_file = training_file;
    req.file_contents = contents;
    req.base_model = base_model;
    req.epochs = epochs.value_or(kDefaultEpochs);
    req.batch_size = batch_size.value_or(compute_batch_size(examples));
    if (req.epochs < 1 || req.batch_size < 1) {
        throw Error(Errc::InvalidArgument, "epochs and batch size must be positive");
    }
    req.idempotency_key = sha256_hex(contents) + ":" + base_model + ":" +
                          std::to_string(req.epochs) + ":" + std::to_string(req.batch_size);

    std::lock_guard lock(finetune_mu_);
    if (const auto it = submitted_.find(req.idempotency_key); it != submitted_.end()) {
        return it->second;
    }
    const auto created = with_retries([&] { return backend_->create_fine_tune(req); });
    FineTuneJob job;
    job.job_id = created.job_id;
    job.base_model = base_model;
    job.training_file = training_file;
    job.epochs = req.epochs;
    job.batch_size = req.batch_size;
    job.status = created.status;
    submitted_.emplace(req.idempotency_key, job);
    return job;
}

FineTuneJob Gateway::poll_job(const FineTuneJob& job) {
    if (job.status.terminal()) return job;
    auto next = job;
    next.status = with_retries([&] { return backend_->retrieve_fine_tune(job.job_id); });
    check_transition(job.status, next.status);
    return next;
}

Verdict Gateway::classify(const std::string& model_id, const std::string& marked_text,
                          EvaluatorPair pair) {
    const auto blocks = parse_marked(marked_text);
    const std::string a_tag(domain_a_tag(pair));
    const std::string b_tag(kInnoTag);
    if (blocks.size() != 2 || !blocks.contains(a_tag) || !blocks.contains(b_tag)) {
        throw Error(Errc::MalformedMarkup, "classifier input for " + std::string(to_string(pair)) +
                                               " needs exactly [" + a_tag + "] and [" + b_tag +
                                               "] blocks");
    }
    CompletionRequest req;
    req.model_id = model_id;
    req.prompt = marked_text + std::string(kPromptSeparator);
    req.max_tokens = 1;
    req.temperature = 0.0;
    req.n = 1;
    req.logprobs = 5;
    const auto choices = complete_choices(req);
    const auto& choice = choices.front();

    auto prob = [&](std::string_view token) {
        const auto it = choice.first_token_logprobs.find(std::string(token));
        return it == choice.first_token_logprobs.end() ? 0.0 : std::exp(it->second);
    };
    double p_rel = prob(kRelatedToken);
    double p_unrel = prob(kUnrelatedToken);
    if (p_rel + p_unrel <= 0.0) {
        const auto text = trim(choice.text);
        if (text == trim(kRelatedToken)) {
            p_rel = 1.0;
        } else if (text == trim(kUnrelatedToken)) {
            p_unrel = 1.0;
        } else {
            throw Error(Errc::BackendUnavailable,
                        "classifier response carries no label token: '" + choice.text + "'");
        }
    }
    return verdict_from_probabilities(pair, p_rel, p_unrel);
}

} // namespace bidforge
