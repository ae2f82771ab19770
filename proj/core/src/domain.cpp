// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/domain.hpp"

#include "bidforge/error.hpp"
#include "bidforge/text.hpp"

namespace bidforge {

std::string_view to_string(GeneratorType t) noexcept {
    switch (t) {
    case GeneratorType::Type1: return "type1";
    case GeneratorType::Type2: return "type2";
    case GeneratorType::Type3: return "type3";
    case GeneratorType::NegGen: return "neggen";
    }
    return "";
}

std::string_view display_name(GeneratorType t) noexcept {
    switch (t) {
    case GeneratorType::Type1: return "Type-1";
    case GeneratorType::Type2: return "Type-2";
    case GeneratorType::Type3: return "Type-3";
    case GeneratorType::NegGen: return "NegGen";
    }
    return "";
}

GeneratorType parse_generator_type(std::string_view s) {
    const auto v = to_lower(trim(s));
    if (v == "1" || v == "type1" || v == "type-1") return GeneratorType::Type1;
    if (v == "2" || v == "type2" || v == "type-2") return GeneratorType::Type2;
    if (v == "3" || v == "type3" || v == "type-3") return GeneratorType::Type3;
    if (v == "neggen" || v == "neg") return GeneratorType::NegGen;
    throw Error(Errc::InvalidArgument, "unknown generator type '" + std::string(s) + "'");
}

std::string_view to_string(EvaluatorPair p) noexcept {
    switch (p) {
    case EvaluatorPair::BenefitsInnovation: return "benefits_innovation";
    case EvaluatorPair::ChallengeInnovation: return "challenge_innovation";
    case EvaluatorPair::BioInnovation: return "bio_innovation";
    }
    return "";
}

EvaluatorPair parse_evaluator_pair(std::string_view s) {
    const auto v = to_lower(trim(s));
    if (v == "benefits" || v == "benefits_innovation" || v == "benefitsinnovation")
        return EvaluatorPair::BenefitsInnovation;
    if (v == "challenge" || v == "challenge_innovation" || v == "challengeinnovation")
        return EvaluatorPair::ChallengeInnovation;
    if (v == "bio" || v == "bio_innovation" || v == "bioinnovation")
        return EvaluatorPair::BioInnovation;
    throw Error(Errc::InvalidArgument, "unknown evaluator pair '" + std::string(s) + "'");
}

std::string_view to_string(Label l) noexcept {
    return l == Label::Related ? "related" : "unrelated";
}

std::string_view label_token(Label l) noexcept {
    return l == Label::Related ? kRelatedToken : kUnrelatedToken;
}

std::string_view domain_a_tag(EvaluatorPair p) noexcept {
    switch (p) {
    case EvaluatorPair::BenefitsInnovation: return kBenefitsTag;
    case EvaluatorPair::ChallengeInnovation: return kChallengeTag;
    case EvaluatorPair::BioInnovation: return kBioTag;
    }
    return "";
}

} // namespace bidforge
