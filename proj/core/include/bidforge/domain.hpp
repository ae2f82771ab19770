// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace bidforge {

/// Generator variants. Type1..Type3 tighten the problem space (applications;
/// benefits + applications; full challenge statement). NegGen maps
/// applications to an innovation paragraph only and feeds negative samples.
enum class GeneratorType { Type1, Type2, Type3, NegGen };

/// Correlation evaluators: domain A (problem or nature side) vs innovation.
enum class EvaluatorPair { BenefitsInnovation, ChallengeInnovation, BioInnovation };

enum class Label { Related, Unrelated };

inline constexpr std::array<EvaluatorPair, 3> kAllPairs = {
    EvaluatorPair::BenefitsInnovation, EvaluatorPair::ChallengeInnovation,
    EvaluatorPair::BioInnovation};

inline constexpr std::string_view kPromptSeparator = "\n\n###\n\n";
inline constexpr std::string_view kStopToken = "\n[END]";
inline constexpr std::string_view kRelatedToken = " related";
inline constexpr std::string_view kUnrelatedToken = " unrelated";

inline constexpr std::string_view kBioTag = "Bio";
inline constexpr std::string_view kInnoTag = "Inno";
inline constexpr std::string_view kBenefitsTag = "Ben";
inline constexpr std::string_view kChallengeTag = "Cha";

/// "type1", "type2", "type3", "neggen".
std::string_view to_string(GeneratorType t) noexcept;
/// "Type-1" etc. for reports.
std::string_view display_name(GeneratorType t) noexcept;
/// Accepts "1"/"type1"/"Type-1"/"neggen" (case-insensitive).
GeneratorType parse_generator_type(std::string_view s);

/// "benefits_innovation", "challenge_innovation", "bio_innovation".
std::string_view to_string(EvaluatorPair p) noexcept;
/// Also accepts the short forms "benefits", "challenge", "bio".
EvaluatorPair parse_evaluator_pair(std::string_view s);

std::string_view to_string(Label l) noexcept;
std::string_view label_token(Label l) noexcept;

/// Tag of the A-side block for a pair ("Ben", "Cha" or "Bio"); the B side is
/// always "Inno".
std::string_view domain_a_tag(EvaluatorPair p) noexcept;

} // namespace bidforge
