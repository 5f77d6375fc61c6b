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

#include "advsens/dataset.hpp"

#include <fstream>

#include <json.hpp>

#include "advsens/errors.hpp"

namespace advsens {

std::vector<LabeledExample> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset: " + path);
    std::vector<LabeledExample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.contains("text") || !j.contains("label"))
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected {\"text\", \"label\"}");
        LabeledExample ex;
        ex.text = j["text"].get<std::string>();
        const long long label = j["label"].get<long long>();
        if (label < 0)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": negative label");
        ex.label = static_cast<std::size_t>(label);
        out.push_back(std::move(ex));
    }
    return out;
}

void save_jsonl(const std::vector<LabeledExample>& examples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write dataset: " + path);
    for (const auto& ex : examples) {
        nlohmann::json j{{"text", ex.text}, {"label", ex.label}};
        out << j.dump() << "\n";
    }
}

} // namespace advsens
