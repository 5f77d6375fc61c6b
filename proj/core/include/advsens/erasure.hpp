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

#include <array>
#include <string>

#include "advsens/model.hpp"
#include "advsens/tokens.hpp"

namespace advsens {

/// The ten top-k% scores (k = 10..100) plus their mean.
struct ErasureProfile {
    std::array<double, 10> per_k{};
    double mean = 0.0;
};

/// Per-example erasure summary for one explainer.
struct ErasureScore {
    double comprehensiveness = 0.0;
    double sufficiency = 0.0;
    double loo_tau = 0.0;
    std::string explainer_id;
    bool aggregate = false;
};

/// Probability drop when the top-k% positively contributing tokens are
/// removed, averaged over k in {10, ..., 100}. The rationale at each k is
/// the ceil(k% * P) highest-weight tokens of the P positive-weight
/// tokens, ties broken by earlier position; the scored class is the
/// model's prediction on the full text.
ErasureProfile comprehensiveness_profile(const ModelHandle& model,
                                         const TokenSequence& x,
                                         const Attribution& attr);
double comprehensiveness(const ModelHandle& model, const TokenSequence& x,
                         const Attribution& attr);

/// Mirror of comprehensiveness: probability drop when only the rationale
/// tokens are kept (an empty rationale scores the empty-marker text).
ErasureProfile sufficiency_profile(const ModelHandle& model, const TokenSequence& x,
                                   const Attribution& attr);
double sufficiency(const ModelHandle& model, const TokenSequence& x,
                   const Attribution& attr);

/// Kendall tau-b between two same-length weight vectors (the explainer's
/// attribution and the leave-one-out scores).
double loo_correlation(const Attribution& attr, const Attribution& loo_attr);

} // namespace advsens
