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
#include <unordered_map>
#include <vector>

#include "advsens/tokens.hpp"

namespace advsens {

/// Small dense word-vector table backing both word-candidate similarity
/// and the sentence-level similarity check (cosine of summed window
/// vectors). Out-of-vocabulary words read as the zero vector. Lookups are
/// case-insensitive.
///
/// File format: one `word v1 v2 ... vD` line per entry.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(
        std::vector<std::pair<std::string, std::vector<double>>> rows);

    static EmbeddingTable load(const std::string& path);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    bool contains(const std::string& word) const;

    /// Zero vector when the word is unknown.
    std::vector<double> vector_of(const std::string& word) const;

    /// Cosine similarity; 0 when either word is unknown.
    double cosine(const std::string& a, const std::string& b) const;

    /// In-vocabulary words with cosine(word, candidate) >= min_cos,
    /// excluding the word itself, sorted by descending cosine (ties
    /// alphabetical).
    std::vector<std::pair<std::string, double>> neighbors(const std::string& word,
                                                          double min_cos) const;

    /// Cosine of the summed window vectors of two equally tokenized
    /// texts, over tokens [center - window, center + window]. Returns 0
    /// when either sum has no vocabulary support.
    double window_similarity(const TokenSequence& a, const TokenSequence& b,
                             std::size_t center, std::size_t window) const;

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> words_;
    std::vector<std::vector<double>> vectors_;
    std::size_t dim_ = 0;
};

/// Plain-text word list (one entry per line, stored lowercase).
class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::vector<std::string> words);
    static Lexicon load(const std::string& path);

    bool contains(const std::string& lowercase_word) const;
    const std::vector<std::string>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace advsens
