// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/wmd.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bidforge {

namespace {

void require_non_empty(const NBowDoc& a, const NBowDoc& b) {
    if (a.empty() || b.empty()) throw Error(Errc::EmptyDocument, "document has no in-vocabulary words");
}

std::vector<double> centroid(const NBowDoc& d) {
    std::vector<double> c(d.vectors.front().size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += d.weights[i] * d.vectors[i][k];
    }
    return c;
}

double one_sided(const NBowDoc& from, const Matrix& cost, bool rows_are_from) {
    double total = 0.0;
    const auto outer = rows_are_from ? cost.rows() : cost.cols();
    const auto inner = rows_are_from ? cost.cols() : cost.rows();
    for (std::size_t i = 0; i < outer; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < inner; ++j) {
            best = std::min(best, rows_are_from ? cost(i, j) : cost(j, i));
        }
        total += from.weights[i] * best;
    }
    return total;
}

} // namespace

StopwordSet parse_stopwords(std::string_view text) {
    StopwordSet out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(pos, end - pos));
        if (!line.empty() && line.front() != '#') out.insert(to_lower(line));
        pos = end + 1;
    }
    return out;
}

StopwordSet load_stopwords(const std::string& path) { return parse_stopwords(read_file(path)); }

NBowDoc to_nbow(std::string_view text, const EmbeddingTable& table, const StopwordSet& stopwords) {
    std::map<std::string, std::size_t, std::less<>> slot;
    NBowDoc doc;
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    for (auto& tok : tokenize(text)) {
        if (stopwords.contains(tok)) continue;
        auto vec = table.find(tok);
        if (!vec) continue;
        auto [it, inserted] = slot.try_emplace(tok, doc.words.size());
        if (inserted) {
            doc.words.push_back(tok);
            doc.vectors.emplace_back(vec->begin(), vec->end());
            counts.push_back(0);
        }
        ++counts[it->second];
        ++total;
    }
    if (total == 0) throw Error(Errc::EmptyDocument, "no token survives stopword and vocabulary filtering");
    doc.weights.reserve(counts.size());
    for (auto c : counts) doc.weights.push_back(static_cast<double>(c) / static_cast<double>(total));
    return doc;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "vector lengths differ");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

Matrix ground_cost(const NBowDoc& a, const NBowDoc& b) {
    Matrix cost(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) cost(i, j) = euclidean(a.vectors[i], b.vectors[j]);
    }
    return cost;
}

double wcd(const NBowDoc& a, const NBowDoc& b) {
    require_non_empty(a, b);
    return euclidean(centroid(a), centroid(b));
}

double rwmd(const NBowDoc& a, const NBowDoc& b) {
    require_non_empty(a, b);
    const auto cost = ground_cost(a, b);
    return std::max(one_sided(a, cost, true), one_sided(b, cost, false));
}

WmdResult wmd(const NBowDoc& a, const NBowDoc& b) {
    require_non_empty(a, b);
    TransportProblem problem{a.weights, b.weights, ground_cost(a, b)};
    auto sol = solve_transport(problem);
    WmdResult out;
    out.distance = sol.objective;
    out.flow = std::move(sol.flow);
    out.wcd = wcd(a, b);
    out.rwmd = std::max(one_sided(a, problem.cost, true), one_sided(b, problem.cost, false));
    return out;
}

} // namespace bidforge
