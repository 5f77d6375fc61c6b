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

#include "advsens/model.hpp"

#include <algorithm>
#include <cmath>

#include "advsens/errors.hpp"

namespace advsens {

namespace {

const StopwordSet& no_stopwords() {
    static const StopwordSet empty;
    return empty;
}

std::string label_or_default(const std::vector<std::string>& labels, std::size_t i) {
    return i < labels.size() ? labels[i] : "class_" + std::to_string(i);
}

std::vector<std::string> fill_labels(std::vector<std::string> labels, std::size_t n) {
    for (std::size_t i = labels.size(); i < n; ++i)
        labels.push_back(label_or_default(labels, i));
    return labels;
}

} // namespace

Prediction Prediction::from_probs(std::vector<double> probs) {
    if (probs.empty()) throw InputError("prediction has no class probabilities");
    double sum = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < -1e-9 || p > 1.0 + 1e-9)
            throw InputError("class probability out of [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw InputError("class probabilities do not sum to 1");
    Prediction out;
    out.predicted_class = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    out.confidence = probs[out.predicted_class];
    out.probs = std::move(probs);
    return out;
}

std::vector<double> softmax(std::span<const double> logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        z += out[i];
    }
    for (double& p : out) p /= z;
    return out;
}

Prediction TextModel::predict(const std::string& text) const {
    const std::string arr[1] = {text};
    return predict_batch(std::span<const std::string>(arr, 1)).front();
}

LinearBagModel::LinearBagModel(std::size_t class_count,
                               std::map<std::string, std::vector<double>> token_weights,
                               std::vector<double> bias,
                               std::vector<std::string> labels)
    : class_count_(class_count),
      token_weights_(std::move(token_weights)),
      bias_(std::move(bias)),
      labels_(fill_labels(std::move(labels), class_count)) {
    if (class_count_ < 2) throw ConfigError("model needs at least 2 classes");
    if (bias_.empty()) bias_.assign(class_count_, 0.0);
    if (bias_.size() != class_count_)
        throw ShapeError("bias length does not match class count");
    for (const auto& [word, w] : token_weights_)
        if (w.size() != class_count_)
            throw ShapeError("token weight arity mismatch for '" + word + "'");
}

std::vector<double> LinearBagModel::logits(const std::string& text) const {
    std::vector<double> out = bias_;
    const TokenSequence seq = tokenize(text, no_stopwords());
    for (const Token& tok : seq.tokens) {
        auto it = token_weights_.find(to_lower(tok.surface));
        if (it == token_weights_.end()) continue;
        for (std::size_t c = 0; c < class_count_; ++c) out[c] += it->second[c];
    }
    return out;
}

std::vector<Prediction> LinearBagModel::predict_batch(
    std::span<const std::string> texts) const {
    std::vector<Prediction> out;
    out.reserve(texts.size());
    for (const auto& t : texts)
        out.push_back(Prediction::from_probs(softmax(logits(t))));
    return out;
}

EmbeddingBagModel::EmbeddingBagModel(std::vector<std::string> vocab,
                                     std::vector<double> embeddings,
                                     std::vector<double> linear,
                                     std::vector<double> bias,
                                     std::size_t embedding_dim,
                                     std::vector<std::string> labels)
    : vocab_(std::move(vocab)),
      embeddings_(std::move(embeddings)),
      linear_(std::move(linear)),
      bias_(std::move(bias)),
      dim_(embedding_dim),
      labels_(fill_labels(std::move(labels), bias_.size())) {
    if (bias_.size() < 2) throw ConfigError("model needs at least 2 classes");
    if (embeddings_.size() != vocab_.size() * dim_)
        throw ShapeError("embedding matrix does not match vocab x dim");
    if (linear_.size() != bias_.size() * dim_)
        throw ShapeError("linear layer does not match classes x dim");
    for (std::size_t i = 0; i < vocab_.size(); ++i) index_[vocab_[i]] = i;
}

std::vector<double> EmbeddingBagModel::token_embedding(const std::string& word) const {
    std::vector<double> out(dim_, 0.0);
    auto it = index_.find(to_lower(word));
    if (it == index_.end()) return out;
    const double* row = embeddings_.data() + it->second * dim_;
    out.assign(row, row + dim_);
    return out;
}

EmbeddingBagModel::Matrix EmbeddingBagModel::embed_tokens(const TokenSequence& seq) const {
    Matrix out;
    if (seq.empty()) {
        out.push_back(token_embedding(std::string(kEmptyMarker)));
        return out;
    }
    out.reserve(seq.size());
    for (const Token& tok : seq.tokens) out.push_back(token_embedding(tok.surface));
    return out;
}

EmbeddingBagModel::Matrix EmbeddingBagModel::embed_text(const std::string& text) const {
    return embed_tokens(tokenize(text, no_stopwords()));
}

std::vector<double> EmbeddingBagModel::logits_from_embeddings(const Matrix& embedded) const {
    std::vector<double> mean(dim_, 0.0);
    if (!embedded.empty()) {
        for (const auto& row : embedded) {
            if (row.size() != dim_) throw ShapeError("embedding row has wrong dimension");
            for (std::size_t d = 0; d < dim_; ++d) mean[d] += row[d];
        }
        for (double& v : mean) v /= static_cast<double>(embedded.size());
    }
    std::vector<double> out = bias_;
    for (std::size_t c = 0; c < bias_.size(); ++c) {
        const double* w = linear_.data() + c * dim_;
        for (std::size_t d = 0; d < dim_; ++d) out[c] += w[d] * mean[d];
    }
    return out;
}

std::vector<double> EmbeddingBagModel::logits(const std::string& text) const {
    return logits_from_embeddings(embed_text(text));
}

std::vector<double> EmbeddingBagModel::linear_row(std::size_t cls) const {
    if (cls >= bias_.size()) throw ShapeError("class index out of range");
    const double* w = linear_.data() + cls * dim_;
    return std::vector<double>(w, w + dim_);
}

std::vector<Prediction> EmbeddingBagModel::predict_batch(
    std::span<const std::string> texts) const {
    std::vector<Prediction> out;
    out.reserve(texts.size());
    for (const auto& t : texts)
        out.push_back(Prediction::from_probs(softmax(logits(t))));
    return out;
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::BundledLinear: return "bundled-linear";
        case Backend::BundledDifferentiable: return "bundled-differentiable";
        case Backend::Remote: return "remote";
    }
    return "unknown";
}

ModelHandle::ModelHandle(Backend backend, std::shared_ptr<const TextModel> model)
    : backend_(backend), model_(std::move(model)) {
    if (!model_) throw ConfigError("model handle requires a model");
    if (model_->class_count() < 2) throw ConfigError("model needs at least 2 classes");
}

ModelHandle ModelHandle::bundled_linear(std::shared_ptr<const LinearBagModel> m) {
    return ModelHandle(Backend::BundledLinear, std::move(m));
}

ModelHandle ModelHandle::bundled_differentiable(std::shared_ptr<const EmbeddingBagModel> m) {
    return ModelHandle(Backend::BundledDifferentiable, std::move(m));
}

const EmbeddingBagModel* ModelHandle::differentiable() const {
    if (backend_ != Backend::BundledDifferentiable) return nullptr;
    return dynamic_cast<const EmbeddingBagModel*>(model_.get());
}

} // namespace advsens
