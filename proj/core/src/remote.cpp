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

#include "advsens/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include "advsens/errors.hpp"

namespace advsens {

namespace {

std::string label_name(std::size_t i) { return "class_" + std::to_string(i); }

} // namespace

RemoteModel::RemoteModel(std::string base_url, std::size_t class_count,
                         std::vector<std::string> labels)
    : base_url_(std::move(base_url)), class_count_(class_count),
      labels_(std::move(labels)) {
    if (class_count_ < 2) throw ConfigError("remote model needs at least 2 classes");
    for (std::size_t i = labels_.size(); i < class_count_; ++i)
        labels_.push_back(label_name(i));
}

std::vector<Prediction> RemoteModel::predict_batch(
    std::span<const std::string> texts) const {
    nlohmann::json request;
    request["texts"] = nlohmann::json::array();
    for (const auto& t : texts) request["texts"].push_back(t);

    httplib::Client client(base_url_);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(120, 0);

    auto res = client.Post("/predict", request.dump(), "application/json");
    if (!res)
        throw TransportError("remote backend unreachable: " + base_url_ + " (" +
                             httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw ProtocolError("remote backend returned HTTP " +
                            std::to_string(res->status));

    nlohmann::json body;
    try {
        body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("remote response is not JSON: ") + e.what());
    }
    if (!body.contains("probs") || !body["probs"].is_array())
        throw ProtocolError("remote response is missing \"probs\"");
    const auto& rows = body["probs"];
    if (rows.size() != texts.size())
        throw ProtocolError("remote response has " + std::to_string(rows.size()) +
                            " rows for " + std::to_string(texts.size()) + " texts");

    std::vector<Prediction> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != class_count_)
            throw ProtocolError("remote probability row arity != class_count");
        std::vector<double> probs;
        probs.reserve(class_count_);
        for (const auto& v : row) probs.push_back(v.get<double>());
        try {
            out.push_back(Prediction::from_probs(std::move(probs)));
        } catch (const InputError& e) {
            throw ProtocolError(std::string("remote probabilities invalid: ") + e.what());
        }
    }
    return out;
}

ModelHandle make_remote_handle(std::string base_url, std::size_t class_count,
                               std::vector<std::string> labels) {
    return ModelHandle(Backend::Remote,
                       std::make_shared<RemoteModel>(std::move(base_url), class_count,
                                                     std::move(labels)));
}

} // namespace advsens
