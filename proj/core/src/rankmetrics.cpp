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

#include "advsens/rankmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "advsens/errors.hpp"

namespace advsens {

std::vector<RankItem> rank_items_of(const TokenSequence& seq) {
    std::unordered_map<std::string, std::size_t> counts;
    std::vector<RankItem> out;
    out.reserve(seq.size());
    for (const Token& tok : seq.tokens) {
        const std::size_t occ = counts[tok.surface]++;
        out.push_back(RankItem{tok.surface, occ});
    }
    return out;
}

TokenRanking attribution_to_ranking(const Attribution& attr, const TokenSequence& x) {
    if (attr.weights.size() != x.size())
        throw ShapeError("attribution length does not match token count");
    const std::vector<RankItem> items = rank_items_of(x);

    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (attr.weights[a] != attr.weights[b]) return attr.weights[a] > attr.weights[b];
        return a < b;
    });

    TokenRanking ranking;
    for (const auto& item : items) ranking.universe.insert(item);

    // competition ranks: ties share the smallest rank, next rank skips
    std::size_t assigned = 0;
    std::size_t current_rank = 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && attr.weights[order[k]] != attr.weights[order[k - 1]])
            current_rank = assigned + 1;
        ranking.entries[items[order[k]]] = current_rank;
        ++assigned;
    }
    return ranking;
}

double tau_hat_x(const TokenRanking& a, const TokenRanking& b) {
    // Only items ranked in both contribute: any pair touching an item that
    // is unranked on either side scores zero by definition.
    std::vector<std::pair<std::size_t, std::size_t>> common;
    for (const auto& [item, rank_a] : a.entries) {
        auto it = b.entries.find(item);
        if (it != b.entries.end()) common.emplace_back(rank_a, it->second);
    }
    const std::size_t m = common.size();
    if (m < 2) return 0.0;

    auto score = [](std::size_t ri, std::size_t rj) -> double {
        if (ri < rj) return 1.0;
        if (ri > rj) return -1.0;
        return 1.0; // tied items agree with each other in both orders
    };

    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            acc += score(common[i].first, common[j].first) *
                   score(common[i].second, common[j].second);
        }
    }
    return acc / static_cast<double>(m * (m - 1));
}

double sensitivity_distance(const TokenRanking& a, const TokenRanking& b) {
    return 1.0 - (tau_hat_x(a, b) + 1.0) / 2.0;
}

double pair_sensitivity(const AdversarialPair& pair, const Explainer& explainer,
                        const ModelHandle& model) {
    const Attribution wa = explainer.fn(model, pair.original,
                                        pair.original_pred.predicted_class);
    const Attribution wb = explainer.fn(model, pair.adversarial,
                                        pair.adversarial_pred.predicted_class);
    return sensitivity_distance(attribution_to_ranking(wa, pair.original),
                                attribution_to_ranking(wb, pair.adversarial));
}

double mean_adv_sensitivity(const std::vector<AdversarialPair>& pairs,
                            const Explainer& explainer, const ModelHandle& model) {
    if (pairs.empty())
        throw UndefinedStatisticError("no accepted pairs: attack failed, "
                                      "sensitivity undefined");
    double acc = 0.0;
    for (const auto& p : pairs) acc += pair_sensitivity(p, explainer, model);
    return acc / static_cast<double>(pairs.size());
}

} // namespace advsens
