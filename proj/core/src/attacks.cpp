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

#include "advsens/attacks.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <set>

#include "advsens/errors.hpp"
#include "advsens/parallel.hpp"
#include "advsens/rng.hpp"

namespace advsens {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const StopwordSet& no_stopwords() {
    static const StopwordSet empty;
    return empty;
}

/// Re-tokenizes `text` and carries over the stopword flags of `like`.
/// Returns nullopt when the token count changed (the substitution was
/// not a clean single-token replacement).
std::optional<TokenSequence> retokenize_like(const std::string& text,
                                             const TokenSequence& like) {
    TokenSequence seq = tokenize(text, no_stopwords());
    if (seq.size() != like.size()) return std::nullopt;
    for (std::size_t i = 0; i < seq.size(); ++i)
        seq.tokens[i].is_stopword = like.tokens[i].is_stopword;
    return seq;
}

std::vector<double> importance_by_substitute(const ModelHandle& model,
                                             const TokenSequence& x,
                                             bool delete_instead) {
    if (x.empty()) throw InputError("importance requires a nonempty input");
    std::vector<std::string> texts;
    std::vector<std::size_t> slots;
    texts.push_back(x.source_text);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.tokens[i].is_stopword) continue;
        std::string t = delete_instead
                            ? text_without_token(x, i)
                            : text_with_replacement(x, i, std::string(kUnknownToken));
        if (t.empty()) t = kEmptyMarker;
        texts.push_back(std::move(t));
        slots.push_back(i);
    }
    const auto preds = model.predict_batch(texts);
    const std::size_t cls = preds[0].predicted_class;
    const double p_full = preds[0].probs[cls];

    std::vector<double> scores(x.size(), kNegInf);
    for (std::size_t k = 0; k < slots.size(); ++k)
        scores[slots[k]] = p_full - preds[k + 1].probs[cls];
    return scores;
}

bool is_digit_token(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_capitalized(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])) != 0;
}

std::string match_capitalization(const std::string& pattern, std::string word) {
    if (is_capitalized(pattern) && !word.empty())
        word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    return word;
}

} // namespace

std::string attack_name(AttackId id) {
    switch (id) {
        case AttackId::A1: return "A1";
        case AttackId::A2: return "A2";
        case AttackId::A3: return "A3";
    }
    return "?";
}

std::string failure_name(AttackFailure f) {
    switch (f) {
        case AttackFailure::None: return "none";
        case AttackFailure::NoFlip: return "no-flip";
        case AttackFailure::RejectedLowConfidence: return "rejected-low-confidence";
        case AttackFailure::NoPerturbablePositions: return "no-perturbable-positions";
        case AttackFailure::NoEntities: return "no-entities";
    }
    return "?";
}

std::vector<double> word_importance_by_deletion(const ModelHandle& model,
                                                const TokenSequence& x) {
    return importance_by_substitute(model, x, /*delete_instead=*/true);
}

std::vector<double> word_importance_by_unk(const ModelHandle& model,
                                           const TokenSequence& x) {
    return importance_by_substitute(model, x, /*delete_instead=*/false);
}

std::vector<std::string> candidates_a1(const std::string& word,
                                       const TokenSequence& context,
                                       std::size_t position,
                                       const EmbeddingTable& table,
                                       const AttackConfig& cfg) {
    auto ranked = table.neighbors(word, cfg.min_word_cos);
    if (ranked.size() > cfg.k_candidates) ranked.resize(cfg.k_candidates);

    std::vector<std::string> out;
    for (const auto& [cand, cos] : ranked) {
        auto seq = retokenize_like(text_with_replacement(context, position, cand),
                                   context);
        if (!seq) continue;
        const double sim = table.window_similarity(context, *seq, position,
                                                   cfg.sent_sim_window);
        if (sim >= cfg.sent_sim_threshold) out.push_back(cand);
    }
    return out;
}

std::size_t levenshtein_distance(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::vector<std::string> candidates_a2(const std::string& word,
                                       const TokenSequence& context,
                                       std::size_t position,
                                       const EmbeddingTable& table,
                                       const AttackConfig& cfg) {
    const std::size_t len = word.size();
    if (len < 3) return {};

    // Inner characters are [1, len-2]; every operator keeps the first and
    // last character in place.
    std::set<std::string> raw;
    for (std::size_t i = 1; i + 2 <= len - 1; ++i) { // adjacent inner swap
        std::string w = word;
        std::swap(w[i], w[i + 1]);
        raw.insert(std::move(w));
    }
    for (std::size_t i = 1; i + 1 < len; ++i) { // substitute
        for (char c = 'a'; c <= 'z'; ++c) {
            if (c == word[i]) continue;
            std::string w = word;
            w[i] = c;
            raw.insert(std::move(w));
        }
    }
    for (std::size_t i = 1; i + 1 < len; ++i) { // delete
        std::string w = word;
        w.erase(i, 1);
        raw.insert(std::move(w));
    }
    for (std::size_t i = 1; i < len; ++i) { // insert between characters
        for (char c = 'a'; c <= 'z'; ++c) {
            std::string w = word;
            w.insert(w.begin() + static_cast<std::ptrdiff_t>(i), c);
            raw.insert(std::move(w));
        }
    }
    raw.erase(word);

    std::vector<std::string> out;
    for (const auto& cand : raw) {
        if (levenshtein_distance(word, cand) > cfg.max_edit_distance) continue;
        auto seq = retokenize_like(text_with_replacement(context, position, cand),
                                   context);
        if (!seq) continue;
        const double sim = table.window_similarity(context, *seq, position,
                                                   cfg.sent_sim_window);
        if (sim >= cfg.a2_sent_sim_threshold) out.push_back(cand);
    }
    return out;
}

AdversarialPair greedy_attack(const ModelHandle& model, const TokenSequence& x,
                              const ImportanceFn& importance,
                              const CandidateFn& candidates,
                              const AttackConfig& cfg, AttackId label) {
    if (x.empty()) throw InputError("attack requires a nonempty input");

    AdversarialPair pair;
    pair.attack_id = label;
    pair.original = x;
    pair.original_pred = model.predict(x.source_text);
    pair.adversarial = x;
    pair.adversarial_pred = pair.original_pred;
    const std::size_t orig_class = pair.original_pred.predicted_class;

    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x.tokens[i].is_stopword) positions.push_back(i);
    if (positions.empty()) {
        pair.failure = AttackFailure::NoPerturbablePositions;
        return pair;
    }

    const std::vector<double> scores = importance(model, x);
    if (scores.size() != x.size())
        throw ShapeError("importance length does not match token count");
    std::sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    TokenSequence incumbent = x;
    Prediction incumbent_pred = pair.original_pred;
    double incumbent_p = incumbent_pred.probs[orig_class];
    pair.constraints.incumbent_probs.push_back(incumbent_p);

    for (const std::size_t pos : positions) {
        const std::string word = incumbent.tokens[pos].surface;
        const std::vector<std::string> cands = candidates(word, incumbent, pos);
        if (cands.empty()) continue;

        std::vector<std::string> texts;
        texts.reserve(cands.size());
        for (const auto& c : cands)
            texts.push_back(text_with_replacement(incumbent, pos, c));
        const auto preds = model.predict_batch(texts);

        std::size_t best = 0;
        for (std::size_t j = 1; j < preds.size(); ++j)
            if (preds[j].probs[orig_class] < preds[best].probs[orig_class]) best = j;
        const double best_p = preds[best].probs[orig_class];
        if (best_p >= incumbent_p) continue;

        auto next = retokenize_like(texts[best], incumbent);
        if (!next) continue;

        incumbent = std::move(*next);
        incumbent_pred = preds[best];
        incumbent_p = best_p;
        pair.edits.push_back(Edit{pos, x.tokens[pos].surface, cands[best]});
        pair.constraints.incumbent_probs.push_back(incumbent_p);

        if (incumbent_pred.predicted_class != orig_class) {
            pair.adversarial = incumbent;
            pair.adversarial_pred = incumbent_pred;
            if (incumbent_pred.confidence >= cfg.mcp_threshold) {
                pair.accepted = true;
                pair.failure = AttackFailure::None;
            } else {
                pair.failure = AttackFailure::RejectedLowConfidence;
            }
            return pair;
        }
    }

    pair.adversarial = incumbent;
    pair.adversarial_pred = incumbent_pred;
    pair.failure = AttackFailure::NoFlip;
    return pair;
}

AdversarialPair attack_a1(const ModelHandle& model, const TokenSequence& x,
                          const EmbeddingTable& table, const AttackConfig& cfg) {
    CandidateFn cands = [&table, &cfg](const std::string& word,
                                       const TokenSequence& ctx, std::size_t pos) {
        return candidates_a1(word, ctx, pos, table, cfg);
    };
    AdversarialPair pair =
        greedy_attack(model, x, word_importance_by_deletion, cands, cfg, AttackId::A1);
    for (const Edit& e : pair.edits) {
        pair.constraints.word_cosines.push_back(table.cosine(e.old_token, e.new_token));
        pair.constraints.sentence_sims.push_back(table.window_similarity(
            pair.original, pair.adversarial, e.position, cfg.sent_sim_window));
    }
    return pair;
}

AdversarialPair attack_a2(const ModelHandle& model, const TokenSequence& x,
                          const EmbeddingTable& table, const AttackConfig& cfg) {
    CandidateFn cands = [&table, &cfg](const std::string& word,
                                       const TokenSequence& ctx, std::size_t pos) {
        return candidates_a2(word, ctx, pos, table, cfg);
    };
    AdversarialPair pair =
        greedy_attack(model, x, word_importance_by_unk, cands, cfg, AttackId::A2);
    for (const Edit& e : pair.edits) {
        pair.constraints.edit_distances.push_back(
            levenshtein_distance(e.old_token, e.new_token));
        pair.constraints.sentence_sims.push_back(table.window_similarity(
            pair.original, pair.adversarial, e.position, cfg.sent_sim_window));
    }
    return pair;
}

AdversarialPair attack_a3(const ModelHandle& model, const TokenSequence& x,
                          const Lexicon& names, const Lexicon& locations,
                          const AttackConfig& cfg) {
    AdversarialPair pair;
    pair.attack_id = AttackId::A3;
    pair.original = x;
    pair.original_pred = model.predict(x.source_text.empty()
                                           ? std::string(kEmptyMarker)
                                           : x.source_text);
    pair.adversarial = x;
    pair.adversarial_pred = pair.original_pred;

    enum class Kind { Name, Location, Number };
    struct Entity {
        std::size_t position;
        Kind kind;
    };
    std::vector<Entity> entities;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::string& s = x.tokens[i].surface;
        if (x.tokens[i].is_stopword) continue;
        if (is_digit_token(s)) {
            entities.push_back({i, Kind::Number});
        } else if (i > 0 && is_capitalized(s)) {
            const std::string lower = to_lower(s);
            if (names.contains(lower)) entities.push_back({i, Kind::Name});
            else if (locations.contains(lower)) entities.push_back({i, Kind::Location});
        }
    }
    if (entities.empty()) {
        pair.failure = AttackFailure::NoEntities;
        return pair;
    }

    auto rng = make_rng(derive_seed(derive_seed(cfg.seed, "a3"), x.source_text));
    auto sample_word = [&rng](const Lexicon& lex,
                              const std::string& original) -> std::string {
        std::vector<std::string> pool;
        for (const auto& w : lex.words())
            if (w != to_lower(original)) pool.push_back(w);
        if (pool.empty()) return original;
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        return pool[pick(rng)];
    };
    auto sample_number = [&rng](const std::string& original) -> std::string {
        std::uniform_int_distribution<int> digit('0', '9');
        for (int tries = 0; tries < 64; ++tries) {
            std::string out = original;
            for (std::size_t i = 0; i < out.size(); ++i) {
                char c = static_cast<char>(digit(rng));
                if (i == 0 && out.size() > 1 && c == '0') c = '1';
                out[i] = c;
            }
            if (out != original) return out;
        }
        return original;
    };

    // one substitution per detected entity, one pass over the sentence
    TokenSequence current = x;
    for (const Entity& ent : entities) {
        const std::string original = current.tokens[ent.position].surface;
        std::string replacement;
        switch (ent.kind) {
            case Kind::Name: replacement = sample_word(names, original); break;
            case Kind::Location: replacement = sample_word(locations, original); break;
            case Kind::Number: replacement = sample_number(original); break;
        }
        replacement = match_capitalization(original, replacement);
        if (replacement == original) continue;
        auto next = retokenize_like(text_with_replacement(current, ent.position, replacement),
                                    current);
        if (!next) continue;
        current = std::move(*next);
        pair.edits.push_back(Edit{ent.position, x.tokens[ent.position].surface, replacement});
    }
    if (pair.edits.empty()) {
        pair.failure = AttackFailure::NoEntities;
        return pair;
    }

    pair.adversarial = current;
    pair.adversarial_pred = model.predict(current.source_text);
    if (pair.adversarial_pred.predicted_class == pair.original_pred.predicted_class) {
        pair.failure = AttackFailure::NoFlip;
    } else if (pair.adversarial_pred.confidence < cfg.mcp_threshold) {
        pair.failure = AttackFailure::RejectedLowConfidence;
    } else {
        pair.accepted = true;
        pair.failure = AttackFailure::None;
    }
    return pair;
}

std::vector<AdversarialPair> AttackSuiteResult::accepted(AttackId id) const {
    std::vector<AdversarialPair> out;
    for (const auto& p : pairs[static_cast<std::size_t>(id)])
        if (p.accepted) out.push_back(p);
    return out;
}

AttackSuiteResult run_attack_suite(const ModelHandle& model,
                                   const std::vector<LabeledExample>& dataset,
                                   const StopwordSet& stopwords,
                                   const EmbeddingTable& table,
                                   const Lexicon& names, const Lexicon& locations,
                                   const AttackConfig& cfg, unsigned workers) {
    if (dataset.empty()) throw ConfigError("attack suite requires a nonempty dataset");

    AttackSuiteResult result;
    result.stats.total = dataset.size();

    std::vector<std::size_t> correct_idx;
    {
        std::vector<std::string> texts;
        texts.reserve(dataset.size());
        for (const auto& ex : dataset) texts.push_back(ex.text);
        const auto preds = model.predict_batch(texts);
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (preds[i].predicted_class == dataset[i].label) correct_idx.push_back(i);
    }
    result.stats.correct = correct_idx.size();
    result.stats.clean_accuracy =
        static_cast<double>(correct_idx.size()) / static_cast<double>(dataset.size());

    std::array<std::vector<AdversarialPair>, 3> slots;
    for (auto& s : slots) s.resize(correct_idx.size());

    parallel_for(correct_idx.size(), workers, [&](std::size_t k) {
        const std::size_t i = correct_idx[k];
        const TokenSequence x = tokenize(dataset[i].text, stopwords);
        AttackConfig local = cfg;
        local.seed = derive_seed(cfg.seed, i);

        AdversarialPair a1 = attack_a1(model, x, table, local);
        AdversarialPair a2 = attack_a2(model, x, table, local);
        AdversarialPair a3 = attack_a3(model, x, names, locations, local);
        a1.pair_id = "ex" + std::to_string(i) + ":a1";
        a2.pair_id = "ex" + std::to_string(i) + ":a2";
        a3.pair_id = "ex" + std::to_string(i) + ":a3";
        slots[0][k] = std::move(a1);
        slots[1][k] = std::move(a2);
        slots[2][k] = std::move(a3);
    });

    for (std::size_t a = 0; a < 3; ++a) {
        result.pairs[a] = std::move(slots[a]);
        result.stats.attempted[a] = correct_idx.size();
        std::size_t broken = 0;
        for (const auto& p : result.pairs[a])
            if (p.accepted) ++broken;
        result.stats.accepted[a] = broken;
        result.stats.post_attack_accuracy[a] =
            static_cast<double>(result.stats.correct - broken) /
            static_cast<double>(result.stats.total);
    }
    return result;
}

} // namespace advsens
