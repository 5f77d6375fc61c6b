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

#include <string>
#include <vector>

#include "advsens/model.hpp"

namespace advsens {

/// Stateless JSON-over-HTTP backend. Each batch is one POST to
/// `<base_url>/predict` with body {"texts": [...]}; the response must be
/// {"probs": [[...], ...]} with one inner array of `class_count` floats
/// per input text.
///
/// Connection failures raise TransportError; reachable-but-wrong
/// responses (bad status, malformed JSON, arity mismatch) raise
/// ProtocolError.
class RemoteModel : public TextModel {
public:
    RemoteModel(std::string base_url, std::size_t class_count,
                std::vector<std::string> labels = {});

    std::size_t class_count() const override { return class_count_; }
    const std::vector<std::string>& class_labels() const override { return labels_; }
    std::vector<Prediction> predict_batch(
        std::span<const std::string> texts) const override;

    const std::string& base_url() const { return base_url_; }

private:
    std::string base_url_;
    std::size_t class_count_;
    std::vector<std::string> labels_;
};

ModelHandle make_remote_handle(std::string base_url, std::size_t class_count,
                               std::vector<std::string> labels = {});

} // namespace advsens
