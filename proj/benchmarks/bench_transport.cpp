// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#include "bidforge/transport.hpp"
#include "bidforge/wmd.hpp"
#include "test_support.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

bidforge::TransportProblem random_problem(std::size_t m, std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::uniform_real_distribution<double> c(0.0, 10.0);
    bidforge::TransportProblem p;
    auto weights = [&](std::size_t k) {
        std::vector<double> v(k);
        double s = 0;
        for (auto& x : v) s += (x = w(rng));
        for (auto& x : v) x /= s;
        return v;
    };
    p.supply = weights(m);
    p.demand = weights(n);
    p.cost = bidforge::Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) p.cost(i, j) = c(rng);
    }
    return p;
}

void BM_SolveTransport(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    const auto p = random_problem(k, k, rng);
    for (auto _ : state) benchmark::DoNotOptimize(bidforge::solve_transport(p).objective);
}
BENCHMARK(BM_SolveTransport)->RangeMultiplier(2)->Range(4, 64);

struct Docs {
    bidforge::EmbeddingTable table;
    bidforge::NBowDoc a;
    bidforge::NBowDoc b;
};

Docs make_docs(std::size_t words) {
    std::mt19937_64 rng(2);
    std::vector<std::string> vocab;
    for (std::size_t i = 0; i < 4 * words; ++i) vocab.push_back("w" + std::to_string(i));
    Docs d{testing::random_table(vocab, 300, rng), {}, {}};
    d.a = testing::random_doc(d.table, words, rng);
    d.b = testing::random_doc(d.table, words, rng);
    return d;
}

void BM_Wmd(benchmark::State& state) {
    const auto d = make_docs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bidforge::wmd(d.a, d.b).distance);
}
BENCHMARK(BM_Wmd)->Arg(10)->Arg(40)->Arg(80);

void BM_Rwmd(benchmark::State& state) {
    const auto d = make_docs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bidforge::rwmd(d.a, d.b));
}
BENCHMARK(BM_Rwmd)->Arg(10)->Arg(40)->Arg(80);

} // namespace

BENCHMARK_MAIN();
