// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/mock_backend.hpp"

#include "bidforge/error.hpp"
#include "bidforge/markup.hpp"
#include "bidforge/text.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

namespace bidforge {

namespace {

struct Organism {
    const char* singular;
    const char* plural;
    const char* trait;
    const char* feature;
};

// Template bank. Kept free of square brackets so outputs always parse.
constexpr std::array<Organism, 16> kOrganisms = {{
    {"hummingbird", "Hummingbirds", "hover in place by sweeping their wings in a figure-eight pattern",
     "wing stroke"},
    {"swift", "Swifts", "change the shape of their wings in flight to trade speed for agility",
     "morphing wings"},
    {"albatross", "Albatrosses", "glide for hours by locking their wings and riding wind gradients",
     "wing lock"},
    {"owl", "Owls", "fly silently because comb-like feather edges break up turbulence",
     "feather edges"},
    {"woodpecker", "Woodpeckers", "absorb repeated impacts with spongy bone behind the beak",
     "spongy bone"},
    {"dragonfly", "Dragonflies", "stabilize flight with corrugated wings that stay stiff yet light",
     "corrugated wings"},
    {"beetle", "Beetles", "protect folded wings under a hardened shell made of layered fibers",
     "layered shell"},
    {"honeybee", "Honeybees", "build hexagonal combs that hold maximum load with minimum wax",
     "hexagonal comb"},
    {"pufferfish", "Pufferfish", "inflate quickly to resist impact and deter predators",
     "inflatable body"},
    {"shark", "Sharks", "reduce drag with tooth-like skin scales that channel the flow",
     "skin scales"},
    {"boxfish", "Boxfish", "keep a stable course with a rigid, angular body that sheds vortices",
     "angular body"},
    {"bat", "Bats", "stretch thin elastic membranes across flexible finger bones",
     "membrane wings"},
    {"pterosaur", "Pterosaurs", "combined hollow thin-walled bones with very large wing spans",
     "hollow bones"},
    {"gecko", "Geckos", "cling to smooth surfaces with millions of tiny hair-like setae",
     "adhesive toes"},
    {"lotus", "Lotus leaves", "stay clean because microscopic bumps make water roll off",
     "textured surface"},
    {"maple", "Maple seeds", "spin as they fall so a single wing slows their descent",
     "spinning seed"},
}};

constexpr std::array<const char*, 6> kMechanisms = {
    "This lets the organism save energy while staying in control.",
    "The structure distributes loads so that little material is wasted.",
    "The arrangement reacts passively to changing forces without extra muscles.",
    "Small variations in geometry produce large changes in performance.",
    "The same structure serves several functions at once.",
    "These features evolved under strict limits on weight and energy.",
};

constexpr std::array<const char*, 6> kMaterials = {
    "carbon fiber composite", "aluminium lattice", "glass fiber laminate",
    "titanium alloy", "thermoplastic honeycomb", "woven polymer fabric",
};

constexpr std::array<const char*, 6> kActions = {
    "reduce overall weight", "improve stability", "lower energy use",
    "increase durability", "simplify assembly", "handle changing loads",
};

constexpr std::array<const char*, 5> kEngineering = {
    "uses a modular frame that can be serviced with standard tools",
    "relies on an electric drive controlled by onboard software",
    "combines a stamped metal chassis with bolted panels",
    "is assembled from off-the-shelf sensors and actuators",
    "uses a rechargeable battery pack and a brushless motor",
};

const std::set<std::string>& filler_words() {
    static const std::set<std::string> words = {
        "about", "also", "because", "been", "being", "both", "each", "from", "have", "into",
        "more", "most", "only", "other", "over", "same", "some", "such", "than", "that",
        "their", "them", "then", "there", "these", "they", "this", "those", "through", "very",
        "what", "when", "where", "which", "while", "with", "would", "could", "should", "might",
        "will", "your", "uses", "used", "using", "inspired", "make", "makes", "made"};
    return words;
}

std::vector<std::string> content_words(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) {
        if (t.size() >= 4 && !filler_words().contains(t)) out.push_back(std::move(t));
    }
    return out;
}

template <std::size_t N, typename T>
const T& pick(const std::array<T, N>& bank, std::mt19937_64& rng) {
    return bank[uniform_index(rng, N)];
}

std::string field_line(const std::string& prompt, std::string_view key) {
    const auto pos = prompt.find(key);
    if (pos == std::string::npos) return {};
    const auto start = pos + key.size();
    const auto end = prompt.find('\n', start);
    return trim(prompt.substr(start, end == std::string::npos ? std::string::npos : end - start));
}

std::string first_keyword(const std::string& list) {
    const auto comma = list.find(',');
    return trim(list.substr(0, comma));
}

struct PromptTopic {
    std::string subject;          // what is being designed
    std::string benefit;          // optional
    std::vector<std::string> cues; // words to echo from a challenge statement
};

PromptTopic topic_of(const std::string& prompt, std::mt19937_64& rng) {
    PromptTopic t;
    const auto apps = field_line(prompt, "Applications:");
    const auto bens = field_line(prompt, "Benefits:");
    const auto cha = field_line(prompt, "Challenge:");
    t.subject = apps.empty() ? "device" : first_keyword(apps);
    t.benefit = first_keyword(bens);
    if (!cha.empty()) {
        auto words = content_words(cha);
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
        for (int i = 0; i < 3 && !words.empty(); ++i) {
            const auto k = uniform_index(rng, words.size());
            t.cues.push_back(words[k]);
            words.erase(words.begin() + static_cast<std::ptrdiff_t>(k));
        }
        if (apps.empty()) t.subject = "design";
    }
    return t;
}

} // namespace

std::optional<MockRole> mock_role_of(std::string_view id) {
    if (id == "davinci" || id == "curie" || id == "babbage" || id == "ada") return MockRole::Base;
    if (id.starts_with("mock-neggen")) return MockRole::NegGen;
    if (id.starts_with("mock-gen")) return MockRole::Generator;
    if (id.starts_with("mock-cls")) return MockRole::Classifier;
    if (id.starts_with("mock-base")) return MockRole::Base;
    return std::nullopt;
}

MockBackend::MockBackend(std::uint64_t seed) : seed_(seed) {}

void MockBackend::script_probabilities(const std::string& prompt, double p_related,
                                       double p_unrelated) {
    std::lock_guard lock(mu_);
    scripted_[prompt] = {p_related, p_unrelated};
}

std::string MockBackend::generate_concept(const std::string& prompt, std::uint64_t stream) const {
    std::mt19937_64 rng(stream);
    const auto topic = topic_of(prompt, rng);
    const auto& org = pick(kOrganisms, rng);

    std::string bio = std::string(org.plural) + " " + org.trait + ". " + pick(kMechanisms, rng);

    std::string inno = "The " + topic.subject + " was inspired by the " + org.feature + " of " +
                       to_lower(org.plural) + ". ";
    inno += "Its structure is built from " + std::string(pick(kMaterials, rng)) + " arranged like the " +
            org.singular + " " + org.feature + " to " + pick(kActions, rng) + ".";
    if (!topic.benefit.empty()) {
        inno += " The design keeps the " + topic.subject + " " + topic.benefit +
                " without giving up strength.";
    }
    if (!topic.cues.empty()) {
        inno += " It addresses " + join(topic.cues, ", ") + " in the " + topic.subject + ".";
    }
    return " " + mark(bio, "Bio") + mark(inno, "Inno") + "\n[END]\n";
}

std::string MockBackend::generate_negative(const std::string& prompt, std::uint64_t stream) const {
    std::mt19937_64 rng(stream);
    const auto topic = topic_of(prompt, rng);
    std::string inno = "The " + topic.subject + " " + pick(kEngineering, rng) + ". It is made of " +
                       pick(kMaterials, rng) + " to " + pick(kActions, rng) + ".";
    return " " + mark(inno, "Inno") + "\n[END]\n";
}

std::string MockBackend::generate_free_text(const std::string&, std::uint64_t stream) const {
    std::mt19937_64 rng(stream);
    std::string text = "The system " + std::string(pick(kEngineering, rng)) + ". Its housing is made of " +
                       pick(kMaterials, rng) + " to " + pick(kActions, rng) + ".";
    return " " + text + "\n###\nInnovation: ";
}

CompletionChoice MockBackend::classify(const std::string& prompt, std::uint64_t stream) const {
    double p_rel = 0.5;
    double p_unrel = 0.5;
    bool scripted = false;
    {
        std::lock_guard lock(mu_);
        if (const auto it = scripted_.find(prompt); it != scripted_.end()) {
            std::tie(p_rel, p_unrel) = it->second;
            scripted = true;
        }
    }
    if (!scripted) {
        std::string body = prompt;
        if (const auto sep = body.rfind("\n\n###\n\n"); sep != std::string::npos) body.resize(sep);
        std::map<std::string, std::string> blocks;
        try {
            blocks = parse_marked(body);
        } catch (const Error&) {
        }
        std::vector<std::string> sides;
        for (const auto& [tag, content] : blocks) sides.push_back(content);
        double overlap = 0.0;
        if (sides.size() == 2) {
            auto a = content_words(sides[0]);
            auto b = content_words(sides[1]);
            const std::set<std::string> sa(a.begin(), a.end());
            const std::set<std::string> sb(b.begin(), b.end());
            std::size_t shared = 0;
            for (const auto& w : sa) shared += sb.count(w);
            const auto denom = std::max<std::size_t>(1, std::min(sa.size(), sb.size()));
            overlap = static_cast<double>(shared) / static_cast<double>(denom);
        }
        std::mt19937_64 rng(stream);
        const double jitter = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.3;
        p_rel = std::clamp(0.2 + 1.6 * overlap + jitter, 0.02, 0.98);
        p_unrel = 1.0 - p_rel;
    }
    CompletionChoice c;
    c.text = p_rel >= p_unrel ? " related" : " unrelated";
    if (p_rel > 0.0) c.first_token_logprobs[" related"] = std::log(p_rel);
    if (p_unrel > 0.0) c.first_token_logprobs[" unrelated"] = std::log(p_unrel);
    return c;
}

std::vector<CompletionChoice> MockBackend::complete(const CompletionRequest& request) {
    const auto role = mock_role_of(request.model_id);
    if (!role) {
        throw Error(Errc::ModelNotFound, "mock backend has no model '" + request.model_id + "'",
                    request.model_id);
    }
    std::vector<CompletionChoice> out;
    out.reserve(static_cast<std::size_t>(std::max(0, request.n)));
    for (int i = 0; i < request.n; ++i) {
        std::string key = request.model_id;
        key += '\x1f';
        key += request.prompt;
        key += '\x1f' + std::to_string(i) + '\x1f' + std::to_string(request.nonce) + '\x1f' +
               std::to_string(seed_);
        const auto stream = fnv1a64(key);
        switch (*role) {
        case MockRole::Generator: out.push_back({generate_concept(request.prompt, stream), {}}); break;
        case MockRole::NegGen: out.push_back({generate_negative(request.prompt, stream), {}}); break;
        case MockRole::Base: out.push_back({generate_free_text(request.prompt, stream), {}}); break;
        case MockRole::Classifier: out.push_back(classify(request.prompt, stream)); break;
        }
    }
    return out;
}

namespace {

std::string role_from_training(std::string_view contents) {
    bool classifier = false;
    bool bio = false;
    detail::for_each_line(contents, [&](std::size_t, std::string_view line) {
        const auto j = detail::ojson::parse(line, nullptr, false);
        if (!j.is_object() || !j.contains("completion") || !j["completion"].is_string()) return;
        const auto c = j["completion"].get<std::string>();
        if (c == " related" || c == " unrelated") classifier = true;
        if (c.find("[Bio]") != std::string::npos) bio = true;
    });
    if (classifier) return "cls";
    return bio ? "gen" : "neggen";
}

} // namespace

CreatedJob MockBackend::create_fine_tune(const FineTuneRequest& request) {
    if (!mock_role_of(request.base_model)) {
        throw Error(Errc::ModelNotFound, "mock backend has no base model '" + request.base_model + "'",
                    request.base_model);
    }
    const auto role = role_from_training(request.file_contents);
    const auto digest = sha256_hex(request.file_contents).substr(0, 16);
    CreatedJob job;
    job.job_id = "mockjob-" + role + "-" + digest;
    job.status.state = JobState::Succeeded;
    job.status.model_id = "mock-" + role + "-" + digest;
    return job;
}

JobStatus MockBackend::retrieve_fine_tune(const std::string& job_id) {
    static constexpr std::string_view prefix = "mockjob-";
    if (!job_id.starts_with(prefix)) {
        throw Error(Errc::UnknownJob, "unknown job '" + job_id + "'", job_id);
    }
    const auto rest = job_id.substr(prefix.size());
    const auto dash = rest.find('-');
    const auto role = rest.substr(0, dash);
    if (dash == std::string::npos || (role != "gen" && role != "neggen" && role != "cls")) {
        throw Error(Errc::UnknownJob, "unknown job '" + job_id + "'", job_id);
    }
    JobStatus s;
    s.state = JobState::Succeeded;
    s.model_id = "mock-" + rest;
    return s;
}

} // namespace bidforge
