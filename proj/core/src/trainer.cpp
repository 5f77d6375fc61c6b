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

#include "advsens/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "advsens/errors.hpp"
#include "advsens/rng.hpp"

namespace advsens {

namespace {

const StopwordSet& no_stopwords() {
    static const StopwordSet empty;
    return empty;
}

} // namespace

ModelHandle train_toy_classifier(const std::vector<LabeledExample>& dataset,
                                 const ToyTrainConfig& cfg) {
    if (dataset.empty()) throw ConfigError("training dataset is empty");
    std::set<std::size_t> classes;
    std::size_t max_label = 0;
    for (const auto& ex : dataset) {
        classes.insert(ex.label);
        max_label = std::max(max_label, ex.label);
    }
    if (classes.size() < 2)
        throw ConfigError("training dataset must contain at least 2 classes");
    const std::size_t C = max_label + 1;
    const std::size_t D = cfg.embedding_dim;
    if (D == 0) throw ConfigError("embedding_dim must be positive");

    // Tokenize once; vocabulary in sorted order for reproducibility.
    std::vector<std::vector<std::string>> token_lists(dataset.size());
    std::set<std::string> vocab_set;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const TokenSequence seq = tokenize(dataset[i].text, no_stopwords());
        for (const Token& t : seq.tokens) {
            token_lists[i].push_back(to_lower(t.surface));
            vocab_set.insert(token_lists[i].back());
        }
    }
    std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vocab.size(); ++i) index[vocab[i]] = i;

    auto rng = make_rng(derive_seed(cfg.seed, "toy-trainer"));
    std::normal_distribution<double> init(0.0, 0.1);
    std::vector<double> E(vocab.size() * D);
    std::vector<double> W(C * D);
    std::vector<double> b(C, 0.0);
    for (double& v : E) v = init(rng);
    for (double& v : W) v = init(rng);

    const double n_inv = 1.0 / static_cast<double>(dataset.size());
    std::vector<double> mean(D), logits(C), gmean(D);
    std::vector<double> gE(E.size()), gW(W.size()), gb(C);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::fill(gE.begin(), gE.end(), 0.0);
        std::fill(gW.begin(), gW.end(), 0.0);
        std::fill(gb.begin(), gb.end(), 0.0);

        for (std::size_t i = 0; i < dataset.size(); ++i) {
            const auto& toks = token_lists[i];
            const double n = toks.empty() ? 1.0 : static_cast<double>(toks.size());
            std::fill(mean.begin(), mean.end(), 0.0);
            for (const auto& w : toks) {
                const double* row = E.data() + index[w] * D;
                for (std::size_t d = 0; d < D; ++d) mean[d] += row[d];
            }
            for (double& v : mean) v /= n;

            for (std::size_t c = 0; c < C; ++c) {
                double z = b[c];
                const double* w = W.data() + c * D;
                for (std::size_t d = 0; d < D; ++d) z += w[d] * mean[d];
                logits[c] = z;
            }
            const std::vector<double> p = softmax(logits);

            // delta = p - onehot(label); backprop through mean pooling
            std::fill(gmean.begin(), gmean.end(), 0.0);
            for (std::size_t c = 0; c < C; ++c) {
                const double delta = p[c] - (c == dataset[i].label ? 1.0 : 0.0);
                gb[c] += delta;
                double* gw = gW.data() + c * D;
                const double* w = W.data() + c * D;
                for (std::size_t d = 0; d < D; ++d) {
                    gw[d] += delta * mean[d];
                    gmean[d] += delta * w[d];
                }
            }
            for (const auto& w : toks) {
                double* ge = gE.data() + index[w] * D;
                for (std::size_t d = 0; d < D; ++d) ge[d] += gmean[d] / n;
            }
        }

        const double step = cfg.learning_rate * n_inv;
        for (std::size_t k = 0; k < E.size(); ++k) E[k] -= step * gE[k];
        for (std::size_t k = 0; k < W.size(); ++k) W[k] -= step * gW[k];
        for (std::size_t c = 0; c < C; ++c) b[c] -= step * gb[c];
    }

    auto model = std::make_shared<EmbeddingBagModel>(
        std::move(vocab), std::move(E), std::move(W), std::move(b), D);
    return ModelHandle::bundled_differentiable(std::move(model));
}

double dataset_accuracy(const ModelHandle& model,
                        std::span<const LabeledExample> examples) {
    if (examples.empty()) throw UndefinedStatisticError("accuracy over empty set");
    std::size_t correct = 0;
    for (const auto& ex : examples)
        if (model.predict(ex.text).predicted_class == ex.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(examples.size());
}

} // namespace advsens
