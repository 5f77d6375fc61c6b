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

#include <random>

#include "advsens/consensus.hpp"

using namespace advsens;

static void BM_kemeny_exact(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> rank(1, n);
    std::vector<std::vector<std::size_t>> profile(5, std::vector<std::size_t>(n));
    for (auto& voter : profile)
        for (auto& r : voter) r = rank(rng);
    for (auto _ : state) benchmark::DoNotOptimize(kemeny_young(profile));
}
BENCHMARK(BM_kemeny_exact)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

static void BM_kemeny_heuristic(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> rank(1, n);
    std::vector<std::vector<std::size_t>> profile(5, std::vector<std::size_t>(n));
    for (auto& voter : profile)
        for (auto& r : voter) r = rank(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(kemeny_young(profile, /*exact_cutoff=*/4));
}
BENCHMARK(BM_kemeny_heuristic)->Arg(16)->Arg(32);

static void BM_scores_to_ranking(benchmark::State& state) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
    for (auto& s : scores) s = score(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(scores_to_ranking(scores, true));
}
BENCHMARK(BM_scores_to_ranking)->Arg(6)->Arg(64);

BENCHMARK_MAIN();
