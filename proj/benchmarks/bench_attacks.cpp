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

#include <filesystem>

#include "advsens/attacks.hpp"
#include "advsens/dataset.hpp"
#include "advsens/explainers.hpp"
#include "advsens/trainer.hpp"

using namespace advsens;

namespace {

std::string data_path(const std::string& file) {
    return (std::filesystem::path(ADVSENS_DATA_DIR) / file).string();
}

struct Fixture {
    ModelHandle model;
    StopwordSet stopwords;
    EmbeddingTable table;
    Lexicon names, locations;
    TokenSequence example;
};

const Fixture& fixture() {
    static const Fixture f = [] {
        Fixture out;
        out.stopwords = StopwordSet::load(data_path("stopwords.txt"));
        out.table = EmbeddingTable::load(data_path("mini_embeddings.txt"));
        out.names = Lexicon::load(data_path("names.txt"));
        out.locations = Lexicon::load(data_path("locations.txt"));
        ToyTrainConfig cfg;
        cfg.seed = 1;
        cfg.epochs = 500;
        out.model =
            train_toy_classifier(load_jsonl(data_path("mini_train.jsonl")), cfg);
        out.example = tokenize(
            "i expected a letdown but the film was absolutely wonderful .",
            out.stopwords);
        return out;
    }();
    return f;
}

} // namespace

static void BM_attack_a1(benchmark::State& state) {
    const Fixture& f = fixture();
    AttackConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(attack_a1(f.model, f.example, f.table, cfg));
}
BENCHMARK(BM_attack_a1);

static void BM_attack_a2(benchmark::State& state) {
    const Fixture& f = fixture();
    AttackConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(attack_a2(f.model, f.example, f.table, cfg));
}
BENCHMARK(BM_attack_a2);

static void BM_word_importance(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(word_importance_by_deletion(f.model, f.example));
}
BENCHMARK(BM_word_importance);

static void BM_explain_shapley_exact(benchmark::State& state) {
    const Fixture& f = fixture();
    ExplainerConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(explain_shapley(f.model, f.example, 1, cfg));
}
BENCHMARK(BM_explain_shapley_exact);

BENCHMARK_MAIN();
