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

#include <cstddef>
#include <string>
#include <vector>

namespace advsens {

struct LabeledExample {
    std::string text;
    std::size_t label = 0;
};

/// Reads JSONL with one {"text": ..., "label": ...} object per line.
std::vector<LabeledExample> load_jsonl(const std::string& path);

void save_jsonl(const std::vector<LabeledExample>& examples, const std::string& path);

} // namespace advsens
