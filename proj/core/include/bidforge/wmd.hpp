// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/embeddings.hpp"
#include "bidforge/transport.hpp"

#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bidforge {

using StopwordSet = std::set<std::string, std::less<>>;

/// One lowercase word per line; blank lines and '#' comments are ignored.
StopwordSet parse_stopwords(std::string_view text);
StopwordSet load_stopwords(const std::string& path);

/// Normalized bag of words. Words appear in order of first occurrence.
struct NBowDoc {
    std::vector<std::string> words;
    std::vector<double> weights;
    std::vector<std::vector<double>> vectors;

    std::size_t size() const noexcept { return words.size(); }
    bool empty() const noexcept { return words.empty(); }
};

/// Tokenizes, drops stopwords and out-of-vocabulary tokens, and weights the
/// survivors by relative count. Throws EmptyDocument if nothing survives.
NBowDoc to_nbow(std::string_view text, const EmbeddingTable& table, const StopwordSet& stopwords);

double euclidean(std::span<const double> a, std::span<const double> b);

/// Pairwise Euclidean distances, rows follow `a`, columns follow `b`.
Matrix ground_cost(const NBowDoc& a, const NBowDoc& b);

struct WmdResult {
    double distance = 0.0;
    Matrix flow;
    double wcd = 0.0;
    double rwmd = 0.0;
};

/// Distance between the weighted centroids.
double wcd(const NBowDoc& a, const NBowDoc& b);

/// max(L_ab, L_ba) where L_ab moves every word of `a` to its nearest word
/// in `b` with no capacity limit.
double rwmd(const NBowDoc& a, const NBowDoc& b);

WmdResult wmd(const NBowDoc& a, const NBowDoc& b);

} // namespace bidforge
