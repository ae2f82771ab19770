// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace bidforge {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MissingFile: return "MissingFile";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
    case Errc::FormatError: return "FormatError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptyOutput: return "EmptyOutput";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::EmptyBlock: return "EmptyBlock";
    case Errc::MissingField: return "MissingField";
    case Errc::MalformedMarkup: return "MalformedMarkup";
    case Errc::InsufficientNegatives: return "InsufficientNegatives";
    case Errc::ExemplarCountError: return "ExemplarCountError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::RateLimited: return "RateLimited";
    case Errc::ModelNotFound: return "ModelNotFound";
    case Errc::InvalidTrainingFile: return "InvalidTrainingFile";
    case Errc::UnknownJob: return "UnknownJob";
    case Errc::AllMalformed: return "AllMalformed";
    case Errc::MissingEvaluatorModel: return "MissingEvaluatorModel";
    case Errc::MixedTypes: return "MixedTypes";
    case Errc::UnknownConcept: return "UnknownConcept";
    }
    return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& message) {
    std::string out(errc_name(code));
    out += ": ";
    out += message;
    return out;
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_token_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

} // namespace

Error::Error(Errc code, std::string message, std::string subject,
             std::optional<std::size_t> position)
    : std::runtime_error(compose(code, message)),
      code_(code),
      subject_(std::move(subject)),
      position_(position) {}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_token_byte(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::IoError, "sha256 digest failed");
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(digits[md[i] >> 4]);
        out.push_back(digits[md[i] & 0xf]);
    }
    return out;
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw Error(Errc::InvalidArgument, "uniform_index bound must be positive");
    // Rejection sampling over the largest multiple of bound.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

std::string read_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(Errc::MissingFile, "no such file: " + path, path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path, path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(Errc::IoError, "read failed: " + path, path);
    return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open for writing: " + path, path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(Errc::IoError, "write failed: " + path, path);
}

} // namespace bidforge
