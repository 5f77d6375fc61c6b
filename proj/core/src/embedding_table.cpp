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

#include "advsens/embedding_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "advsens/errors.hpp"

namespace advsens {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double cosine_of(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = norm(a), nb = norm(b);
    if (na < 1e-12 || nb < 1e-12) return 0.0;
    return dot(a, b) / (na * nb);
}

} // namespace

EmbeddingTable::EmbeddingTable(
    std::vector<std::pair<std::string, std::vector<double>>> rows) {
    for (auto& [word, vec] : rows) {
        if (vec.empty()) throw ConfigError("empty embedding vector for '" + word + "'");
        if (dim_ == 0) dim_ = vec.size();
        if (vec.size() != dim_)
            throw ConfigError("embedding dimension mismatch for '" + word + "'");
        const std::string key = to_lower(word);
        if (index_.count(key)) continue;
        index_[key] = words_.size();
        words_.push_back(key);
        vectors_.push_back(std::move(vec));
    }
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open embedding table: " + path);
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> vec;
        double v;
        while (ss >> v) vec.push_back(v);
        if (word.empty() || vec.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected `word v1 v2 ...`");
        rows.emplace_back(std::move(word), std::move(vec));
    }
    return EmbeddingTable(std::move(rows));
}

bool EmbeddingTable::contains(const std::string& word) const {
    return index_.count(to_lower(word)) > 0;
}

std::vector<double> EmbeddingTable::vector_of(const std::string& word) const {
    auto it = index_.find(to_lower(word));
    if (it == index_.end()) return std::vector<double>(dim_, 0.0);
    return vectors_[it->second];
}

double EmbeddingTable::cosine(const std::string& a, const std::string& b) const {
    auto ia = index_.find(to_lower(a));
    auto ib = index_.find(to_lower(b));
    if (ia == index_.end() || ib == index_.end()) return 0.0;
    return cosine_of(vectors_[ia->second], vectors_[ib->second]);
}

std::vector<std::pair<std::string, double>> EmbeddingTable::neighbors(
    const std::string& word, double min_cos) const {
    auto it = index_.find(to_lower(word));
    if (it == index_.end()) return {};
    const auto& anchor = vectors_[it->second];
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (i == it->second) continue;
        const double c = cosine_of(anchor, vectors_[i]);
        if (c >= min_cos) out.emplace_back(words_[i], c);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

double EmbeddingTable::window_similarity(const TokenSequence& a,
                                         const TokenSequence& b,
                                         std::size_t center,
                                         std::size_t window) const {
    auto window_sum = [&](const TokenSequence& seq) {
        std::vector<double> acc(dim_, 0.0);
        if (seq.empty()) return acc;
        const std::size_t lo = center >= window ? center - window : 0;
        const std::size_t hi = std::min(seq.size(), center + window + 1);
        for (std::size_t i = lo; i < hi; ++i) {
            auto it = index_.find(to_lower(seq.tokens[i].surface));
            if (it == index_.end()) continue;
            const auto& v = vectors_[it->second];
            for (std::size_t d = 0; d < dim_; ++d) acc[d] += v[d];
        }
        return acc;
    };
    return cosine_of(window_sum(a), window_sum(b));
}

Lexicon::Lexicon(std::vector<std::string> words) {
    for (auto& w : words) {
        const std::string key = to_lower(w);
        if (key.empty() || index_.count(key)) continue;
        index_[key] = words_.size();
        words_.push_back(key);
    }
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return Lexicon(std::move(words));
}

bool Lexicon::contains(const std::string& lowercase_word) const {
    return index_.count(lowercase_word) > 0;
}

} // namespace advsens
