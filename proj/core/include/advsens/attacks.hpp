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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "advsens/dataset.hpp"
#include "advsens/embedding_table.hpp"
#include "advsens/model.hpp"
#include "advsens/tokens.hpp"

namespace advsens {

struct AttackConfig {
    std::size_t k_candidates = 50;
    double min_word_cos = 0.5;
    double sent_sim_threshold = 0.84;
    std::size_t sent_sim_window = 15;
    std::size_t max_edit_distance = 2;
    double a2_sent_sim_threshold = 0.8;
    double mcp_threshold = 0.70;
    std::uint64_t seed = 0;
};

enum class AttackId { A1, A2, A3 };

std::string attack_name(AttackId id);

enum class AttackFailure {
    None,
    NoFlip,
    RejectedLowConfidence,
    NoPerturbablePositions,
    NoEntities,
};

std::string failure_name(AttackFailure f);

struct Edit {
    std::size_t position = 0;
    std::string old_token;
    std::string new_token;
};

/// Constraint values actually achieved by an attack result.
struct ConstraintReport {
    std::vector<double> word_cosines;        // per edit, word-level attacks
    std::vector<std::size_t> edit_distances; // per edit, character-level
    std::vector<double> sentence_sims;       // per edit, windowed similarity
    std::vector<double> incumbent_probs;     // original-class prob trajectory
};

struct AdversarialPair {
    TokenSequence original;
    Prediction original_pred;
    TokenSequence adversarial;
    Prediction adversarial_pred;
    AttackId attack_id = AttackId::A1;
    std::vector<Edit> edits;
    ConstraintReport constraints;
    bool accepted = false;
    AttackFailure failure = AttackFailure::None;
    std::string pair_id;
};

/// score_i = p_pred(x) - p_pred(x minus token i); stopwords score -inf
/// and are never selected for perturbation.
std::vector<double> word_importance_by_deletion(const ModelHandle& model,
                                                const TokenSequence& x);

/// Same contract, substituting the reserved unknown token instead of
/// deleting.
std::vector<double> word_importance_by_unk(const ModelHandle& model,
                                           const TokenSequence& x);

/// Word-level candidates: table neighbors with cosine >= min_word_cos,
/// capped at k_candidates, that keep the windowed sentence similarity at
/// `position` above sent_sim_threshold. Unknown words yield no candidates.
std::vector<std::string> candidates_a1(const std::string& word,
                                       const TokenSequence& context,
                                       std::size_t position,
                                       const EmbeddingTable& table,
                                       const AttackConfig& cfg);

/// Character-level candidates from the four inner-character edit
/// operators (adjacent swap, substitute, delete, insert), filtered to
/// Levenshtein distance <= max_edit_distance and windowed sentence
/// similarity >= a2_sent_sim_threshold. Words shorter than 3 characters
/// yield no candidates; all operators preserve the first and last
/// character.
std::vector<std::string> candidates_a2(const std::string& word,
                                       const TokenSequence& context,
                                       std::size_t position,
                                       const EmbeddingTable& table,
                                       const AttackConfig& cfg);

std::size_t levenshtein_distance(const std::string& a, const std::string& b);

using ImportanceFn =
    std::function<std::vector<double>(const ModelHandle&, const TokenSequence&)>;
using CandidateFn = std::function<std::vector<std::string>(
    const std::string& word, const TokenSequence& context, std::size_t position)>;

/// Shared greedy search: visits non-stopword positions in decreasing
/// importance, adopts the candidate substitution that most reduces the
/// original-class probability when it improves on the incumbent, and
/// stops at the first label flip. A flip is accepted only when the
/// adversarial confidence reaches mcp_threshold. Failures are returned
/// as unaccepted pairs with a reason, never thrown.
AdversarialPair greedy_attack(const ModelHandle& model, const TokenSequence& x,
                              const ImportanceFn& importance,
                              const CandidateFn& candidates,
                              const AttackConfig& cfg, AttackId label);

/// Word-level attack: deletion importance + embedding-neighbor candidates.
AdversarialPair attack_a1(const ModelHandle& model, const TokenSequence& x,
                          const EmbeddingTable& table, const AttackConfig& cfg);

/// Character-level attack: unknown-token importance + typo candidates.
AdversarialPair attack_a2(const ModelHandle& model, const TokenSequence& x,
                          const EmbeddingTable& table, const AttackConfig& cfg);

/// Invariance attack: replaces every detected entity token (capitalized
/// mid-sentence lexicon words and digit tokens) once with a sampled
/// same-category alternative, in a single pass, then checks the flip and
/// the confidence filter.
AdversarialPair attack_a3(const ModelHandle& model, const TokenSequence& x,
                          const Lexicon& names, const Lexicon& locations,
                          const AttackConfig& cfg);

struct AttackStats {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::array<std::size_t, 3> attempted{};
    std::array<std::size_t, 3> accepted{};
    double clean_accuracy = 0.0;
    /// Post-attack accuracy counts an example as broken iff its attack
    /// produced an accepted pair; failed attacks leave it correct.
    std::array<double, 3> post_attack_accuracy{};
};

struct AttackSuiteResult {
    std::array<std::vector<AdversarialPair>, 3> pairs; // accepted + failures
    AttackStats stats;

    std::vector<AdversarialPair> accepted(AttackId id) const;
};

/// Runs A1, A2 and A3 on every correctly-classified example.
AttackSuiteResult run_attack_suite(const ModelHandle& model,
                                   const std::vector<LabeledExample>& dataset,
                                   const StopwordSet& stopwords,
                                   const EmbeddingTable& table,
                                   const Lexicon& names, const Lexicon& locations,
                                   const AttackConfig& cfg, unsigned workers = 1);

} // namespace advsens
