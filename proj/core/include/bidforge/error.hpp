// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bidforge {

enum class Errc {
    InvalidArgument,
    MissingFile,
    IoError,
    ParseError,
    FormatError,
    ValidationError,
    EmptyCorpus,
    EmptyInput,
    EmptyOutput,
    EmptyDocument,
    EmptyBlock,
    MissingField,
    MalformedMarkup,
    InsufficientNegatives,
    ExemplarCountError,
    DimensionMismatch,
    NumericalFailure,
    BackendUnavailable,
    RateLimited,
    ModelNotFound,
    InvalidTrainingFile,
    UnknownJob,
    AllMalformed,
    MissingEvaluatorModel,
    MixedTypes,
    UnknownConcept,
};

std::string_view errc_name(Errc code) noexcept;

/// The single exception type thrown by the library. `code()` identifies the
/// failure class; `subject()` names the offending record, field, word, tag or
/// model when there is one; `position()` carries a line number or byte offset
/// for parse-style failures.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::string subject = {},
          std::optional<std::size_t> position = std::nullopt);

    Errc code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }
    std::optional<std::size_t> position() const noexcept { return position_; }

    /// Seconds suggested by the server before retrying (RateLimited only).
    std::optional<double> retry_after() const noexcept { return retry_after_; }
    Error& with_retry_after(double seconds) {
        retry_after_ = seconds;
        return *this;
    }

private:
    Errc code_;
    std::string subject_;
    std::optional<std::size_t> position_;
    std::optional<double> retry_after_;
};

} // namespace bidforge
