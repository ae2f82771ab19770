// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/concept_engine.hpp"
#include "bidforge/wmd.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bidforge {

inline constexpr std::size_t kHistogramBins = 20;

struct DistributionSummary {
    std::size_t count = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    /// Equal-width bins over [0, max]; the last bin is closed on the right.
    double bin_width = 0.0;
    std::array<std::size_t, kHistogramBins> histogram{};
};

/// Quartiles interpolate linearly between order statistics. An empty input
/// gives an all-zero summary.
DistributionSummary summarize(std::span<const double> values);

struct DistanceEntry {
    std::string concept_id;
    GeneratorType gtype = GeneratorType::Type1;
    double distance = 0.0;
};

struct DiversityReport {
    std::vector<DistanceEntry> entries;
    /// Concepts whose innovation text has no in-vocabulary word.
    std::vector<std::string> skipped;
    DistributionSummary summary;
    std::map<GeneratorType, DistributionSummary> by_type;
};

/// WMD of each concept's innovation text to `reference`. Throws EmptyInput
/// for no concepts and EmptyDocument (subject "reference") when the
/// reference has no in-vocabulary word. `workers` = 0 uses every core.
DiversityReport diversity_report(const std::vector<GeneratedConcept>& concepts,
                                 std::string_view reference, const EmbeddingTable& table,
                                 const StopwordSet& stopwords, std::size_t workers = 0);

std::string diversity_to_json(const DiversityReport& report);

/// concept_id,type,distance with one row per measured concept.
std::string diversity_to_csv(const DiversityReport& report);

} // namespace bidforge
