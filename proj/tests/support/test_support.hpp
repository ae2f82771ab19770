// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/corpus.hpp"
#include "bidforge/embeddings.hpp"
#include "bidforge/wmd.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "bidforge") {
        std::random_device rd;
        const auto base = std::filesystem::temp_directory_path();
        for (;;) {
            path_ = base / (tag + "-" + std::to_string(rd()));
            if (std::filesystem::create_directory(path_)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline bidforge::InnovationRecord make_record(const std::string& id) {
    bidforge::InnovationRecord r;
    r.id = id;
    r.benefits = {"lightweight", "strength"};
    r.applications = {"flying car", "drone"};
    r.challenge = "Challenge text for " + id + " about reducing mass while keeping strength.";
    r.innovation = "Innovation text for " + id + " using a hollow lattice frame.";
    r.biomimicry = "Biomimicry text for " + id + " where birds rely on hollow bones.";
    return r;
}

inline bidforge::Corpus make_corpus(std::size_t n) {
    bidforge::Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "r%03zu", i);
        c.records.push_back(make_record(id));
    }
    return c;
}

/// Table of `words` with uniform random vectors in [-1, 1]^dim.
inline bidforge::EmbeddingTable random_table(const std::vector<std::string>& words, std::size_t dim,
                                             std::mt19937_64& rng) {
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    bidforge::EmbeddingTable t(dim);
    std::vector<float> v(dim);
    for (const auto& w : words) {
        for (auto& x : v) x = u(rng);
        t.add(w, v);
    }
    return t;
}

/// nBOW built directly from a random subset of `table` with random weights.
inline bidforge::NBowDoc random_doc(const bidforge::EmbeddingTable& table, std::size_t max_words,
                                    std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> count(1, max_words);
    std::vector<std::size_t> idx(table.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(count(rng), idx.size()));
    std::uniform_int_distribution<int> freq(1, 5);
    bidforge::NBowDoc d;
    double total = 0.0;
    for (auto i : idx) {
        d.words.push_back(table.word(i));
        const auto v = table.vector(i);
        d.vectors.emplace_back(v.begin(), v.end());
        d.weights.push_back(freq(rng));
        total += d.weights.back();
    }
    for (auto& w : d.weights) w /= total;
    return d;
}

} // namespace testing
