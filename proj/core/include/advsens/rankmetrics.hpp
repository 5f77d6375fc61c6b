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

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "advsens/attacks.hpp"
#include "advsens/explainers.hpp"
#include "advsens/model.hpp"
#include "advsens/tokens.hpp"

namespace advsens {

/// Identity of a ranked token: its surface form plus the occurrence index
/// among equal surfaces in the same sequence. The same key appearing in
/// two texts is treated as the same item; everything else is unranked.
struct RankItem {
    std::string surface;
    std::size_t occurrence = 0;

    auto operator<=>(const RankItem&) const = default;
};

/// Possibly tied, possibly incomplete ranking over RankItems.
/// Ranks are competition ranks: tied items share the smallest rank and
/// the next used rank skips by the size of the tie group.
struct TokenRanking {
    std::map<RankItem, std::size_t> entries;
    std::set<RankItem> universe;

    std::optional<std::size_t> rank_of(const RankItem& item) const {
        auto it = entries.find(item);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }
};

/// (surface, occurrence) keys for every token of a sequence, in order.
std::vector<RankItem> rank_items_of(const TokenSequence& seq);

/// Ranks tokens by descending signed weight; exact weight ties share a
/// competition rank. Throws ShapeError when the attribution length does
/// not match the sequence.
TokenRanking attribution_to_ranking(const Attribution& attr, const TokenSequence& x);

/// Correlation for non-strict, incomplete rankings.
///
/// For each ordered pair of distinct items ranked in both inputs, the
/// pair score is s_a * s_b with s = +1 for strictly-ahead, -1 for
/// strictly-behind, and +1 for a tie (tied-agreement convention). The
/// result is the mean pair score; pairs involving an item unranked in
/// either input contribute nothing, and 0 is returned when no pair is
/// ranked in both.
double tau_hat_x(const TokenRanking& a, const TokenRanking& b);

/// d = 1 - (tau_hat_x + 1) / 2, in [0, 1].
double sensitivity_distance(const TokenRanking& a, const TokenRanking& b);

/// Adversarial sensitivity of one accepted pair for one explainer: the
/// ranking distance between the explanation of each text for its own
/// predicted class.
double pair_sensitivity(const AdversarialPair& pair, const Explainer& explainer,
                        const ModelHandle& model);

/// Mean pair_sensitivity over accepted pairs. Throws
/// UndefinedStatisticError on an empty list (an attack with no accepted
/// pairs has no statistic; it is not zero).
double mean_adv_sensitivity(const std::vector<AdversarialPair>& pairs,
                            const Explainer& explainer, const ModelHandle& model);

} // namespace advsens
