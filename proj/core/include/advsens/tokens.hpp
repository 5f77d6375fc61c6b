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
#include <unordered_set>
#include <vector>

namespace advsens {

/// One token of a tokenized text: the surface form, its [begin, end) byte
/// span in the source string, and whether it is a stopword.
struct Token {
    std::string surface;
    std::size_t begin = 0;
    std::size_t end = 0;
    bool is_stopword = false;
};

/// Lowercase stopword vocabulary, one token per line on disk (UTF-8).
class StopwordSet {
public:
    StopwordSet() = default;
    explicit StopwordSet(std::vector<std::string> words);

    static StopwordSet load(const std::string& path);

    bool contains(const std::string& lowercase_word) const {
        return words_.count(lowercase_word) > 0;
    }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Tokenized text. Spans are non-overlapping, strictly increasing, and
/// splice back into source_text with only whitespace between them.
struct TokenSequence {
    std::vector<Token> tokens;
    std::string source_text;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    const Token& operator[](std::size_t i) const { return tokens[i]; }
};

/// ASCII-only lowercasing; multi-byte UTF-8 passes through untouched.
std::string to_lower(std::string_view s);

/// Deterministic word/punctuation split.
///
/// Runs of letters and digits (plus apostrophes between letters) form word
/// tokens; every other non-space character becomes its own token. Bytes
/// >= 0x80 are treated as word characters so UTF-8 text stays intact.
TokenSequence tokenize(std::string_view text, const StopwordSet& stopwords);

/// Text with only the tokens where keep[i] is true, joined by single
/// spaces. This is the shared deletion semantics used by perturbation
/// explainers, erasure metrics, and word-importance scoring.
std::string text_with_tokens_kept(const TokenSequence& seq,
                                  const std::vector<bool>& keep);

/// Text with token `position` removed; all other tokens kept.
std::string text_without_token(const TokenSequence& seq, std::size_t position);

/// Splices `replacement` over the span of token `position` in the source
/// text, leaving every other byte untouched.
std::string text_with_replacement(const TokenSequence& seq,
                                  std::size_t position,
                                  const std::string& replacement);

} // namespace advsens
