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

#pragma once

#include <cstdint>
#include <span>

#include "advsens/dataset.hpp"
#include "advsens/model.hpp"

namespace advsens {

struct ToyTrainConfig {
    std::size_t embedding_dim = 16;
    std::size_t epochs = 2000;
    double learning_rate = 1.0;
    std::uint64_t seed = 0;
};

/// Trains the bundled differentiable classifier (mean of learned token
/// embeddings into a linear layer) with full-batch gradient descent on
/// cross-entropy. Deterministic for a fixed seed. Throws ConfigError if
/// fewer than two classes are present.
ModelHandle train_toy_classifier(const std::vector<LabeledExample>& dataset,
                                 const ToyTrainConfig& cfg);

double dataset_accuracy(const ModelHandle& model,
                        std::span<const LabeledExample> examples);

} // namespace advsens
