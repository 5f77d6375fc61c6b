/*
 * Copyright 2026 The advsens Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "advsens/rankmetrics.hpp"

using namespace advsens;

namespace {

TokenRanking random_ranking(std::size_t n, double overlap, std::mt19937_64& rng) {
    std::vector<std::size_t> ranks(n);
    std::iota(ranks.begin(), ranks.end(), std::size_t{1});
    std::shuffle(ranks.begin(), ranks.end(), rng);
    std::bernoulli_distribution keep(overlap);
    TokenRanking r;
    for (std::size_t i = 0; i < n; ++i) {
        const RankItem item{"tok" + std::to_string(i), 0};
        r.universe.insert(item);
        if (keep(rng)) r.entries[item] = ranks[i];
    }
    return r;
}

} // namespace

static void BM_tau_hat_x(benchmark::State& state) {
    std::mt19937_64 rng(42);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const TokenRanking a = random_ranking(n, 0.8, rng);
    const TokenRanking b = random_ranking(n, 0.8, rng);
    for (auto _ : state) benchmark::DoNotOptimize(tau_hat_x(a, b));
}
BENCHMARK(BM_tau_hat_x)->Arg(16)->Arg(64)->Arg(256);

static void BM_attribution_to_ranking(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) text += "tok" + std::to_string(i) + " ";
    const TokenSequence x = tokenize(text, StopwordSet{});
    Attribution attr;
    attr.weights.resize(n);
    for (auto& w : attr.weights) w = weight(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(attribution_to_ranking(attr, x));
}
BENCHMARK(BM_attribution_to_ranking)->Arg(16)->Arg(128);

BENCHMARK_MAIN();
