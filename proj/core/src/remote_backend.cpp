// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/remote_backend.hpp"

#include "bidforge/error.hpp"
#include "json_util.hpp"

#include <httplib.h>

#include <cstdlib>
#include <filesystem>

namespace bidforge {

using detail::ojson;

namespace {

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string prefix; // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(Errc::InvalidArgument, "base URL needs a scheme: '" + url + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl s;
    s.origin = url.substr(0, path_start);
    s.prefix = path_start == std::string::npos ? std::string{} : url.substr(path_start);
    while (!s.prefix.empty() && s.prefix.back() == '/') s.prefix.pop_back();
    return s;
}

JobStatus parse_status(const ojson& j) {
    JobStatus s;
    const auto status = j.value("status", std::string{"pending"});
    if (status == "succeeded") {
        s.state = JobState::Succeeded;
        if (j.contains("fine_tuned_model") && j["fine_tuned_model"].is_string()) {
            s.model_id = j["fine_tuned_model"].get<std::string>();
        }
    } else if (status == "failed" || status == "cancelled") {
        s.state = JobState::Failed;
        s.reason = status;
        if (j.contains("error") && j["error"].is_object()) {
            s.reason = j["error"].value("message", status);
        }
    } else if (status == "running") {
        s.state = JobState::Running;
    } else {
        s.state = JobState::Pending;
    }
    return s;
}

ojson parse_body(const std::string& body, const char* what) {
    try {
        return ojson::parse(body);
    } catch (const nlohmann::json::parse_error&) {
        throw Error(Errc::BackendUnavailable, std::string("unparseable ") + what + " response");
    }
}

} // namespace

std::string api_key_from_env() {
    const char* v = std::getenv(kApiKeyEnv);
    return v ? std::string(v) : std::string{};
}

struct RemoteBackend::Impl {
    RemoteOptions options;
    SplitUrl url;

    httplib::Headers headers(const std::string& idempotency_key = {}) const {
        httplib::Headers h;
        if (!options.api_key.empty()) h.emplace("Authorization", "Bearer " + options.api_key);
        if (!idempotency_key.empty()) h.emplace("Idempotency-Key", idempotency_key);
        return h;
    }

    httplib::Client client() const {
        httplib::Client c(url.origin);
        const auto t = static_cast<time_t>(options.timeout.count());
        c.set_connection_timeout(t, 0);
        c.set_read_timeout(t, 0);
        c.set_write_timeout(t, 0);
        return c;
    }

    // Maps transport and status failures onto library errors.
    void check(const httplib::Result& res, const std::string& what, Errc not_found,
               const std::string& subject) const {
        if (!res) {
            throw Error(Errc::BackendUnavailable,
                        what + ": " + httplib::to_string(res.error()));
        }
        const int status = res->status;
        if (status >= 200 && status < 300) return;
        std::string message = what + ": HTTP " + std::to_string(status);
        const auto j = ojson::parse(res->body, nullptr, false);
        if (j.is_object() && j.contains("error") && j["error"].is_object()) {
            message += " " + j["error"].value("message", std::string{});
        }
        if (status == 429) {
            Error e(Errc::RateLimited, message);
            if (res->has_header("Retry-After")) {
                char* end = nullptr;
                const auto v = res->get_header_value("Retry-After");
                const double secs = std::strtod(v.c_str(), &end);
                if (end != v.c_str()) e.with_retry_after(secs);
            }
            throw e;
        }
        if (status == 404) throw Error(not_found, message, subject);
        if (status == 400 || status == 422) throw Error(Errc::InvalidArgument, message, subject);
        throw Error(Errc::BackendUnavailable, message, subject);
    }
};

RemoteBackend::RemoteBackend(RemoteOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->url = split_url(options.base_url);
    impl_->options = std::move(options);
}

RemoteBackend::~RemoteBackend() = default;

std::vector<CompletionChoice> RemoteBackend::complete(const CompletionRequest& request) {
    ojson body;
    body["model"] = request.model_id;
    body["prompt"] = request.prompt;
    body["max_tokens"] = request.max_tokens;
    body["temperature"] = request.temperature;
    body["n"] = request.n;
    if (!request.stop.empty()) body["stop"] = request.stop;
    if (request.logprobs > 0) body["logprobs"] = request.logprobs;

    auto cli = impl_->client();
    const auto res = cli.Post(impl_->url.prefix + "/completions", impl_->headers(), body.dump(),
                              "application/json");
    impl_->check(res, "completion", Errc::ModelNotFound, request.model_id);

    const auto j = parse_body(res->body, "completion");
    if (!j.contains("choices") || !j["choices"].is_array()) {
        throw Error(Errc::BackendUnavailable, "completion response lacks choices");
    }
    std::vector<CompletionChoice> out(j["choices"].size());
    for (std::size_t k = 0; k < j["choices"].size(); ++k) {
        const auto& c = j["choices"][k];
        const auto index = c.value("index", k);
        if (index >= out.size()) throw Error(Errc::BackendUnavailable, "choice index out of range");
        auto& choice = out[index];
        choice.text = c.value("text", std::string{});
        if (c.contains("logprobs") && c["logprobs"].is_object()) {
            const auto& lp = c["logprobs"];
            if (lp.contains("top_logprobs") && lp["top_logprobs"].is_array() &&
                !lp["top_logprobs"].empty() && lp["top_logprobs"][0].is_object()) {
                for (const auto& [tok, val] : lp["top_logprobs"][0].items()) {
                    if (val.is_number()) choice.first_token_logprobs[tok] = val.get<double>();
                }
            }
        }
    }
    return out;
}

CreatedJob RemoteBackend::create_fine_tune(const FineTuneRequest& request) {
    auto cli = impl_->client();
    httplib::MultipartFormDataItems items = {
        {"purpose", "fine-tune", "", ""},
        {"file", request.file_contents,
         std::filesystem::path(request.training_file).filename().string(), "application/jsonl"},
    };
    const auto up = cli.Post(impl_->url.prefix + "/files", impl_->headers(request.idempotency_key + ":file"),
                             items);
    impl_->check(up, "file upload", Errc::BackendUnavailable, request.training_file);
    const auto file = parse_body(up->body, "file upload");
    const auto file_id = file.value("id", std::string{});
    if (file_id.empty()) throw Error(Errc::BackendUnavailable, "file upload returned no id");

    ojson body;
    body["training_file"] = file_id;
    body["model"] = request.base_model;
    body["n_epochs"] = request.epochs;
    body["batch_size"] = request.batch_size;
    const auto res = cli.Post(impl_->url.prefix + "/fine-tunes", impl_->headers(request.idempotency_key),
                              body.dump(), "application/json");
    impl_->check(res, "fine-tune create", Errc::ModelNotFound, request.base_model);
    const auto j = parse_body(res->body, "fine-tune create");
    CreatedJob job;
    job.job_id = j.value("id", std::string{});
    if (job.job_id.empty()) throw Error(Errc::BackendUnavailable, "fine-tune create returned no id");
    job.status = parse_status(j);
    return job;
}

JobStatus RemoteBackend::retrieve_fine_tune(const std::string& job_id) {
    auto cli = impl_->client();
    const auto res = cli.Get(impl_->url.prefix + "/fine-tunes/" + job_id, impl_->headers());
    impl_->check(res, "fine-tune retrieve", Errc::UnknownJob, job_id);
    return parse_status(parse_body(res->body, "fine-tune retrieve"));
}

} // namespace bidforge
