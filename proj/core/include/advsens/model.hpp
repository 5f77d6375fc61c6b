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
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "advsens/tokens.hpp"

namespace advsens {

// Reserved marker words. Both are plain word tokens that survive the
// tokenizer in one piece and fall outside any realistic vocabulary, so
// every bundled backend treats them as unknown (zero-weight) input.
inline constexpr std::string_view kUnknownToken = "xxunkxx";
inline constexpr std::string_view kEmptyMarker = "xxemptyxx";

/// Class-probability output of one model call.
struct Prediction {
    std::vector<double> probs;
    std::size_t predicted_class = 0;
    double confidence = 0.0; // max class probability (MCP)

    /// Validates the distribution (each prob in [0,1], sum within 1e-6 of
    /// 1) and fills argmax fields; ties resolve to the lowest index.
    /// Throws InputError on violation.
    static Prediction from_probs(std::vector<double> probs);
};

std::vector<double> softmax(std::span<const double> logits);

/// Black-box text classifier contract. Implementations are immutable
/// after construction and safe for concurrent prediction.
class TextModel {
public:
    virtual ~TextModel() = default;

    virtual std::size_t class_count() const = 0;
    virtual const std::vector<std::string>& class_labels() const = 0;
    virtual std::vector<Prediction> predict_batch(
        std::span<const std::string> texts) const = 0;

    Prediction predict(const std::string& text) const;
};

/// Bag-of-words linear classifier with hand-settable weights. Logits are
/// bias plus the sum of per-class token weights over all occurrences
/// (case-insensitive, unknown words contribute nothing). Empty input
/// yields the bias logits.
class LinearBagModel : public TextModel {
public:
    LinearBagModel(std::size_t class_count,
                   std::map<std::string, std::vector<double>> token_weights,
                   std::vector<double> bias = {},
                   std::vector<std::string> labels = {});

    std::size_t class_count() const override { return class_count_; }
    const std::vector<std::string>& class_labels() const override { return labels_; }
    std::vector<Prediction> predict_batch(
        std::span<const std::string> texts) const override;

    std::vector<double> logits(const std::string& text) const;

private:
    std::size_t class_count_;
    std::map<std::string, std::vector<double>> token_weights_;
    std::vector<double> bias_;
    std::vector<std::string> labels_;
};

/// Differentiable bundled backend: mean of learned token embeddings
/// followed by a linear layer and softmax. The logit path is exposed so
/// gradient-based explainers can work on embeddings directly.
class EmbeddingBagModel : public TextModel {
public:
    using Matrix = std::vector<std::vector<double>>; // tokens x dims

    EmbeddingBagModel(std::vector<std::string> vocab,
                      std::vector<double> embeddings, // vocab x dim, row-major
                      std::vector<double> linear,     // classes x dim, row-major
                      std::vector<double> bias,
                      std::size_t embedding_dim,
                      std::vector<std::string> labels = {});

    std::size_t class_count() const override { return bias_.size(); }
    const std::vector<std::string>& class_labels() const override { return labels_; }
    std::vector<Prediction> predict_batch(
        std::span<const std::string> texts) const override;

    std::size_t embedding_dim() const { return dim_; }
    std::size_t vocab_size() const { return vocab_.size(); }

    /// Embedding row for a word; zeros when out of vocabulary.
    std::vector<double> token_embedding(const std::string& word) const;

    /// Embedding matrix for a tokenized text (empty text yields the
    /// single zero row of the empty marker).
    Matrix embed_tokens(const TokenSequence& seq) const;
    Matrix embed_text(const std::string& text) const;

    /// Logits of the linear head on the row-mean of `embedded`.
    std::vector<double> logits_from_embeddings(const Matrix& embedded) const;
    std::vector<double> logits(const std::string& text) const;

    /// Row `cls` of the linear layer (length embedding_dim).
    std::vector<double> linear_row(std::size_t cls) const;

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> vocab_;
    std::vector<double> embeddings_;
    std::vector<double> linear_;
    std::vector<double> bias_;
    std::size_t dim_;
    std::vector<std::string> labels_;
};

enum class Backend { BundledLinear, BundledDifferentiable, Remote };

std::string backend_name(Backend b);

/// Shared, immutable handle to a classifier plus its backend descriptor.
/// Copies are cheap and safe to use from many evaluation workers.
class ModelHandle {
public:
    ModelHandle() = default;
    ModelHandle(Backend backend, std::shared_ptr<const TextModel> model);

    static ModelHandle bundled_linear(std::shared_ptr<const LinearBagModel> m);
    static ModelHandle bundled_differentiable(std::shared_ptr<const EmbeddingBagModel> m);

    Backend backend() const { return backend_; }
    const TextModel& model() const { return *model_; }
    std::size_t class_count() const { return model_->class_count(); }
    const std::vector<std::string>& class_labels() const { return model_->class_labels(); }

    /// Non-null only for the bundled differentiable backend.
    const EmbeddingBagModel* differentiable() const;

    Prediction predict(const std::string& text) const { return model_->predict(text); }
    std::vector<Prediction> predict_batch(std::span<const std::string> texts) const {
        return model_->predict_batch(texts);
    }

private:
    Backend backend_ = Backend::BundledLinear;
    std::shared_ptr<const TextModel> model_;
};

/// One weight vector per token of an input, as produced by an explainer
/// for a specific class.
struct Attribution {
    std::vector<double> weights;
    std::string explainer_id;
    std::size_t target_class = 0;
};

} // namespace advsens
