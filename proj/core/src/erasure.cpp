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

#include "advsens/erasure.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "advsens/errors.hpp"

namespace advsens {

namespace {

void require_match(const TokenSequence& x, const Attribution& attr) {
    if (attr.weights.size() != x.size())
        throw ShapeError("attribution length does not match token count");
}

/// Positive-weight token indices, highest weight first, earlier position
/// breaking ties.
std::vector<std::size_t> positive_token_order(const Attribution& attr) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < attr.weights.size(); ++i)
        if (attr.weights[i] > 0.0) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (attr.weights[a] != attr.weights[b]) return attr.weights[a] > attr.weights[b];
        return a < b;
    });
    return idx;
}

ErasureProfile erasure_profile(const ModelHandle& model, const TokenSequence& x,
                               const Attribution& attr, bool keep_rationale) {
    require_match(x, attr);
    const auto positives = positive_token_order(attr);
    const Prediction full = model.predict(x.source_text.empty()
                                              ? std::string(kEmptyMarker)
                                              : x.source_text);
    const std::size_t j = full.predicted_class;

    std::vector<std::string> texts;
    texts.reserve(10);
    for (int step = 1; step <= 10; ++step) {
        const std::size_t take = positives.empty()
            ? 0
            : static_cast<std::size_t>(std::ceil(
                  static_cast<double>(step) / 10.0 *
                  static_cast<double>(positives.size())));
        std::vector<bool> in_rationale(x.size(), false);
        for (std::size_t k = 0; k < take; ++k) in_rationale[positives[k]] = true;

        std::vector<bool> keep(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            keep[i] = keep_rationale ? in_rationale[i] : !in_rationale[i];

        std::string t = text_with_tokens_kept(x, keep);
        texts.push_back(t.empty() ? std::string(kEmptyMarker) : std::move(t));
    }
    const auto preds = model.predict_batch(texts);

    ErasureProfile profile;
    double acc = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
        profile.per_k[k] = full.probs[j] - preds[k].probs[j];
        acc += profile.per_k[k];
    }
    profile.mean = acc / 10.0;
    return profile;
}

} // namespace

ErasureProfile comprehensiveness_profile(const ModelHandle& model,
                                         const TokenSequence& x,
                                         const Attribution& attr) {
    return erasure_profile(model, x, attr, /*keep_rationale=*/false);
}

double comprehensiveness(const ModelHandle& model, const TokenSequence& x,
                         const Attribution& attr) {
    return comprehensiveness_profile(model, x, attr).mean;
}

ErasureProfile sufficiency_profile(const ModelHandle& model, const TokenSequence& x,
                                   const Attribution& attr) {
    return erasure_profile(model, x, attr, /*keep_rationale=*/true);
}

double sufficiency(const ModelHandle& model, const TokenSequence& x,
                   const Attribution& attr) {
    return sufficiency_profile(model, x, attr).mean;
}

double loo_correlation(const Attribution& attr, const Attribution& loo_attr) {
    if (attr.weights.size() != loo_attr.weights.size())
        throw ShapeError("attribution lengths differ");
    const auto& a = attr.weights;
    const auto& b = loo_attr.weights;
    const std::size_t n = a.size();

    // Kendall tau-b with tie corrections in both variables.
    double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0.0 && db == 0.0) continue;
            if (da == 0.0) ++ties_a;
            else if (db == 0.0) ++ties_b;
            else if (da * db > 0.0) ++concordant;
            else ++discordant;
        }
    }
    const double denom = std::sqrt((concordant + discordant + ties_a) *
                                   (concordant + discordant + ties_b));
    if (denom == 0.0) return 0.0;
    return (concordant - discordant) / denom;
}

} // namespace advsens
