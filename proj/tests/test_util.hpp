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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "advsens/model.hpp"
#include "advsens/tokens.hpp"

namespace advsens::testing {

inline std::string data_path(const std::string& file) {
    return (std::filesystem::path(ADVSENS_DATA_DIR) / file).string();
}

inline const StopwordSet& stopwords() {
    static const StopwordSet set = StopwordSet::load(data_path("stopwords.txt"));
    return set;
}

inline TokenSequence tok(const std::string& text) {
    return tokenize(text, stopwords());
}

/// Two-class linear bag model from per-word class-1 logit contributions;
/// class 0 logit stays 0, so p1 = sigmoid(sum of weights).
inline ModelHandle binary_linear(const std::map<std::string, double>& word_logits,
                                 double bias1 = 0.0) {
    std::map<std::string, std::vector<double>> weights;
    for (const auto& [w, v] : word_logits) weights[w] = {0.0, v};
    auto model = std::make_shared<LinearBagModel>(
        2, std::move(weights), std::vector<double>{0.0, bias1});
    return ModelHandle::bundled_linear(std::move(model));
}

/// Model that ignores its input entirely.
inline ModelHandle constant_model() { return binary_linear({}, 0.7); }

/// Two-class model whose class-1 probability is an arbitrary lookup over
/// presence masks of the tokens t0..t{n-1}; the game board for Shapley
/// axiom tests.
class MaskGameModel : public TextModel {
public:
    MaskGameModel(std::size_t n, std::vector<double> values)
        : n_(n), values_(std::move(values)), labels_{"class_0", "class_1"} {}

    std::size_t class_count() const override { return 2; }
    const std::vector<std::string>& class_labels() const override { return labels_; }
    std::vector<Prediction> predict_batch(
        std::span<const std::string> texts) const override {
        std::vector<Prediction> out;
        for (const auto& text : texts) {
            std::size_t mask = 0;
            const TokenSequence seq = tokenize(text, StopwordSet{});
            for (const Token& t : seq.tokens) {
                if (t.surface.size() >= 2 && t.surface[0] == 't') {
                    const std::size_t idx =
                        static_cast<std::size_t>(std::stoul(t.surface.substr(1)));
                    if (idx < n_) mask |= (std::size_t{1} << idx);
                }
            }
            const double p1 = values_[mask];
            out.push_back(Prediction::from_probs({1.0 - p1, p1}));
        }
        return out;
    }

    double value(std::size_t mask) const { return values_[mask]; }

private:
    std::size_t n_;
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

inline ModelHandle game_model(std::size_t n, std::vector<double> values) {
    return ModelHandle(Backend::BundledLinear,
                       std::make_shared<MaskGameModel>(n, std::move(values)));
}

inline std::string game_text(std::size_t n) {
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
        if (!text.empty()) text.push_back(' ');
        text += "t" + std::to_string(i);
    }
    return text;
}

} // namespace advsens::testing
