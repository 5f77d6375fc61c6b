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

#include "advsens/tokens.hpp"

#include <cctype>
#include <fstream>

#include "advsens/errors.hpp"

namespace advsens {

namespace {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
    return std::isspace(c) != 0;
}

} // namespace

StopwordSet::StopwordSet(std::vector<std::string> words) {
    for (auto& w : words) words_.insert(to_lower(w));
}

StopwordSet StopwordSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stopword list: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return StopwordSet(std::move(words));
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s)
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    return out;
}

TokenSequence tokenize(std::string_view text, const StopwordSet& stopwords) {
    TokenSequence seq;
    seq.source_text.assign(text);
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        if (is_word_byte(c)) {
            ++i;
            while (i < n) {
                const unsigned char cur = static_cast<unsigned char>(text[i]);
                if (is_word_byte(cur)) {
                    ++i;
                } else if (cur == '\'' && i + 1 < n &&
                           is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
                    // internal apostrophe: don't / o'clock
                    i += 2;
                } else {
                    break;
                }
            }
        } else {
            // every punctuation mark is its own token
            ++i;
        }
        Token tok;
        tok.surface.assign(text.substr(begin, i - begin));
        tok.begin = begin;
        tok.end = i;
        tok.is_stopword = stopwords.contains(to_lower(tok.surface));
        seq.tokens.push_back(std::move(tok));
    }
    return seq;
}

std::string text_with_tokens_kept(const TokenSequence& seq,
                                  const std::vector<bool>& keep) {
    if (keep.size() != seq.size())
        throw ShapeError("keep mask length does not match token count");
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!keep[i]) continue;
        if (!out.empty()) out.push_back(' ');
        out += seq.tokens[i].surface;
    }
    return out;
}

std::string text_without_token(const TokenSequence& seq, std::size_t position) {
    std::vector<bool> keep(seq.size(), true);
    keep.at(position) = false;
    return text_with_tokens_kept(seq, keep);
}

std::string text_with_replacement(const TokenSequence& seq,
                                  std::size_t position,
                                  const std::string& replacement) {
    const Token& tok = seq.tokens.at(position);
    std::string out;
    out.reserve(seq.source_text.size() + replacement.size());
    out.append(seq.source_text, 0, tok.begin);
    out.append(replacement);
    out.append(seq.source_text, tok.end, std::string::npos);
    return out;
}

} // namespace advsens
