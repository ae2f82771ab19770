// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/diversity.hpp"

#include "bidforge/error.hpp"
#include "bidforge/parallel.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace bidforge {

using detail::ojson;

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ojson summary_json(const DistributionSummary& s) {
    ojson j;
    j["count"] = s.count;
    j["min"] = s.min;
    j["max"] = s.max;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["q1"] = s.q1;
    j["q3"] = s.q3;
    j["bin_width"] = s.bin_width;
    j["histogram"] = s.histogram;
    return j;
}

} // namespace

DistributionSummary summarize(std::span<const double> values) {
    DistributionSummary s;
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.count = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
    s.median = quantile(sorted, 0.5);
    s.q1 = quantile(sorted, 0.25);
    s.q3 = quantile(sorted, 0.75);
    s.bin_width = s.max / static_cast<double>(kHistogramBins);
    for (double v : sorted) {
        std::size_t bin = 0;
        if (s.bin_width > 0.0) {
            bin = std::min(kHistogramBins - 1, static_cast<std::size_t>(v / s.bin_width));
        }
        ++s.histogram[bin];
    }
    return s;
}

DiversityReport diversity_report(const std::vector<GeneratedConcept>& concepts,
                                 std::string_view reference, const EmbeddingTable& table,
                                 const StopwordSet& stopwords, std::size_t workers) {
    if (concepts.empty()) throw Error(Errc::EmptyInput, "no concepts to measure");
    NBowDoc ref;
    try {
        ref = to_nbow(reference, table, stopwords);
    } catch (const Error& e) {
        if (e.code() != Errc::EmptyDocument) throw;
        throw Error(Errc::EmptyDocument, "reference has no in-vocabulary words", "reference");
    }

    std::vector<std::optional<double>> dist(concepts.size());
    parallel_for(concepts.size(), workers, [&](std::size_t i) {
        NBowDoc doc;
        try {
            doc = to_nbow(concepts[i].innovation, table, stopwords);
        } catch (const Error& e) {
            if (e.code() == Errc::EmptyDocument) return;
            throw;
        }
        dist[i] = wmd(doc, ref).distance;
    });

    DiversityReport report;
    std::vector<double> all;
    std::map<GeneratorType, std::vector<double>> per_type;
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        if (!dist[i]) {
            report.skipped.push_back(concepts[i].concept_id);
            continue;
        }
        report.entries.push_back({concepts[i].concept_id, concepts[i].gtype, *dist[i]});
        all.push_back(*dist[i]);
        per_type[concepts[i].gtype].push_back(*dist[i]);
    }
    report.summary = summarize(all);
    for (const auto& [t, values] : per_type) report.by_type[t] = summarize(values);
    return report;
}

std::string diversity_to_json(const DiversityReport& report) {
    ojson j;
    j["summary"] = summary_json(report.summary);
    ojson types = ojson::object();
    for (const auto& [t, s] : report.by_type) types[std::string(to_string(t))] = summary_json(s);
    j["by_type"] = types;
    j["skipped"] = report.skipped;
    ojson entries = ojson::array();
    for (const auto& e : report.entries) {
        ojson row;
        row["concept_id"] = e.concept_id;
        row["type"] = to_string(e.gtype);
        row["distance"] = e.distance;
        entries.push_back(row);
    }
    j["distances"] = entries;
    return j.dump(2) + "\n";
}

std::string diversity_to_csv(const DiversityReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "concept_id,type,distance\n";
    for (const auto& e : report.entries) {
        out << e.concept_id << ',' << to_string(e.gtype) << ',' << e.distance << '\n';
    }
    return out.str();
}

} // namespace bidforge
