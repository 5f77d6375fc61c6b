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
#include <functional>
#include <string>
#include <vector>

#include "advsens/model.hpp"
#include "advsens/tokens.hpp"

namespace advsens {

struct ExplainerConfig {
    std::size_t surrogate_samples = 1000;
    /// <= 0 selects the default 0.25 * sqrt(token count).
    double surrogate_kernel_width = 0.0;
    /// Regress over all 2^n presence masks instead of sampling.
    bool surrogate_exhaustive = false;
    std::size_t shapley_exact_max_tokens = 12;
    std::size_t shapley_mc_samples = 2048;
    std::size_t ig_steps = 32;
    /// Fill value of the integration baseline embedding.
    double ig_baseline = 0.0;
    std::uint64_t seed = 0;
};

/// Raw per-dimension attribution of a gradient-family method, one row per
/// token and one column per embedding dimension.
struct PerDimAttribution {
    std::vector<std::vector<double>> values;
    std::size_t target_class = 0;
};

// --- perturbation-based -------------------------------------------------

/// Local surrogate explanation: weighted linear regression of the target
/// class probability over binary token-presence masks (masked tokens are
/// deleted), with an exponential kernel on the mask Hamming distance.
Attribution explain_surrogate(const ModelHandle& model, const TokenSequence& x,
                              std::size_t target, const ExplainerConfig& cfg);

/// Token-deletion Shapley values of v(S) = target probability on the text
/// keeping only tokens in S. Exact enumeration up to
/// shapley_exact_max_tokens tokens, Monte Carlo permutation sampling above.
Attribution explain_shapley(const ModelHandle& model, const TokenSequence& x,
                            std::size_t target, const ExplainerConfig& cfg);

/// weight_i = p_target(x) - p_target(x without token i).
Attribution explain_loo(const ModelHandle& model, const TokenSequence& x,
                        std::size_t target);

// --- gradient-based (bundled differentiable backend only) ----------------

/// d(target logit)/d(embedding of token i), per dimension.
/// Throws CapabilityError for non-differentiable backends.
PerDimAttribution gradient_per_dim(const ModelHandle& model, const TokenSequence& x,
                                   std::size_t target);

/// Midpoint-Riemann integrated gradients of the target logit from the
/// baseline embedding to the input embedding, per dimension.
PerDimAttribution integrated_gradient_per_dim(const ModelHandle& model,
                                              const TokenSequence& x,
                                              std::size_t target,
                                              const ExplainerConfig& cfg);

/// Element-wise product of a per-dimension attribution with the token
/// embeddings, summed over dimensions. Throws ShapeError on mismatch.
Attribution apply_input_gating(const PerDimAttribution& per_dim,
                               const std::vector<std::vector<double>>& embeddings);

/// L2 norm over embedding dimensions of the plain gradient.
Attribution explain_gradient(const ModelHandle& model, const TokenSequence& x,
                             std::size_t target);

/// Signed per-dimension sum of integrated gradients.
Attribution explain_integrated_gradient(const ModelHandle& model,
                                        const TokenSequence& x, std::size_t target,
                                        const ExplainerConfig& cfg);

Attribution explain_grad_x_input(const ModelHandle& model, const TokenSequence& x,
                                 std::size_t target);

Attribution explain_intgrad_x_input(const ModelHandle& model, const TokenSequence& x,
                                    std::size_t target, const ExplainerConfig& cfg);

/// Seeded uniform-noise attribution; the uninformative control.
Attribution explain_random(const TokenSequence& x, std::size_t target,
                           std::uint64_t seed);

// --- registry -------------------------------------------------------------

struct Explainer {
    std::string id;
    std::function<Attribution(const ModelHandle&, const TokenSequence&, std::size_t)> fn;
};

/// Known ids: lime, shapley, grad, intgrad, grad_x_input, intgrad_x_input,
/// loo, random. Throws ConfigError for anything else.
Explainer make_explainer(const std::string& id, const ExplainerConfig& cfg);

bool explainer_requires_gradients(const std::string& id);

const std::vector<std::string>& builtin_explainer_ids();

} // namespace advsens
