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

#include "advsens/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "advsens/errors.hpp"

namespace advsens {

namespace {

std::string format_cell(const std::optional<double>& v) {
    if (!v) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

std::size_t ScoreTable::column_index(const std::string& id) const {
    auto it = std::find(column_ids.begin(), column_ids.end(), id);
    if (it == column_ids.end()) throw InputError("unknown column: " + id);
    return static_cast<std::size_t>(it - column_ids.begin());
}

bool ScoreTable::column_complete(std::size_t col) const {
    for (const auto& row : cells)
        if (!row[col].has_value()) return false;
    return true;
}

std::string ScoreTable::to_csv() const {
    std::ostringstream out;
    out << "explainer";
    for (const auto& c : column_ids) out << "," << c;
    out << "\n";
    out << "direction";
    for (std::size_t c = 0; c < column_ids.size(); ++c)
        out << "," << (higher_better[c] ? "higher" : "lower");
    out << "\n";
    for (std::size_t r = 0; r < row_ids.size(); ++r) {
        out << row_ids[r];
        for (std::size_t c = 0; c < column_ids.size(); ++c)
            out << "," << format_cell(cells[r][c]);
        out << "\n";
    }
    return out.str();
}

void ScoreTable::save_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write score table: " + path);
    out << to_csv();
}

ScoreTable ScoreTable::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    ScoreTable table;

    if (!std::getline(in, line)) throw InputError("empty score table");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.empty()) throw InputError("empty score table header");
    table.column_ids.assign(header.begin() + 1, header.end());

    if (!std::getline(in, line)) throw InputError("score table is missing the direction row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto direction = split_csv_line(line);
    if (direction.empty() || direction[0] != "direction" ||
        direction.size() != header.size())
        throw InputError("malformed direction row");
    for (std::size_t c = 1; c < direction.size(); ++c) {
        if (direction[c] == "higher") table.higher_better.push_back(true);
        else if (direction[c] == "lower") table.higher_better.push_back(false);
        else throw InputError("direction must be higher|lower, got: " + direction[c]);
    }

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw InputError("ragged score table row: " + line);
        table.row_ids.push_back(fields[0]);
        std::vector<std::optional<double>> row;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            if (fields[c] == "NA" || fields[c].empty()) {
                row.push_back(std::nullopt);
            } else {
                try {
                    row.push_back(std::stod(fields[c]));
                } catch (const std::exception&) {
                    throw InputError("bad score cell: " + fields[c]);
                }
            }
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

ScoreTable ScoreTable::load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open score table: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str());
}

std::vector<std::size_t> scores_to_ranking(std::span<const double> scores,
                                           bool higher_better) {
    for (double s : scores)
        if (std::isnan(s)) throw InputError("NaN score cannot be ranked");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b])
            return higher_better ? scores[a] > scores[b] : scores[a] < scores[b];
        return a < b;
    });

    std::vector<std::size_t> ranks(scores.size(), 0);
    std::size_t current_rank = 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && scores[order[k]] != scores[order[k - 1]]) current_rank = k + 1;
        ranks[order[k]] = current_rank;
    }
    return ranks;
}

namespace {

/// Pairwise cost table in half-units: cost[j][k] = total penalty over all
/// voters for placing j strictly before k (2 when the voter prefers k, 1
/// when the voter ties them).
std::vector<std::vector<std::uint64_t>> pairwise_cost(
    const std::vector<std::vector<std::size_t>>& rankings, std::size_t n) {
    std::vector<std::vector<std::uint64_t>> cost(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& r : rankings) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (j == k) continue;
                if (r[j] > r[k]) cost[j][k] += 2;
                else if (r[j] == r[k]) cost[j][k] += 1;
            }
        }
    }
    return cost;
}

std::uint64_t order_cost(const std::vector<std::size_t>& order,
                         const std::vector<std::vector<std::uint64_t>>& cost) {
    std::uint64_t acc = 0;
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b)
            acc += cost[order[a]][order[b]];
    return acc;
}

ConsensusRanking from_order(const std::vector<std::size_t>& order,
                            std::uint64_t half_units, bool unique, bool exact) {
    ConsensusRanking out;
    out.ranking.resize(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        out.ranking[order[pos]] = pos + 1;
    out.total_distance = static_cast<double>(half_units) / 2.0;
    out.unique_optimum = unique;
    out.exact = exact;
    return out;
}

ConsensusRanking kemeny_exact(const std::vector<std::vector<std::uint64_t>>& cost,
                              std::size_t n) {
    const std::size_t full = (std::size_t{1} << n) - 1;
    constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

    // dp[S] = minimal cost of ordering the item set S as a suffix, where
    // choosing j first in S pays cost[j][k] against every other k in S.
    std::vector<std::uint64_t> dp(full + 1, kInf);
    std::vector<std::uint64_t> ways(full + 1, 0);
    dp[0] = 0;
    ways[0] = 1;
    for (std::size_t S = 1; S <= full; ++S) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!((S >> j) & 1u)) continue;
            std::uint64_t inc = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j && ((S >> k) & 1u)) inc += cost[j][k];
            const std::size_t rest = S & ~(std::size_t{1} << j);
            if (dp[rest] == kInf) continue;
            const std::uint64_t total = dp[rest] + inc;
            if (total < dp[S]) {
                dp[S] = total;
                ways[S] = ways[rest];
            } else if (total == dp[S]) {
                ways[S] += ways[rest];
            }
        }
    }

    // lexicographically smallest optimal order: scan candidates ascending
    std::vector<std::size_t> order;
    std::size_t S = full;
    while (S) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!((S >> j) & 1u)) continue;
            std::uint64_t inc = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j && ((S >> k) & 1u)) inc += cost[j][k];
            const std::size_t rest = S & ~(std::size_t{1} << j);
            if (dp[rest] != kInf && dp[rest] + inc == dp[S]) {
                order.push_back(j);
                S = rest;
                break;
            }
        }
    }
    return from_order(order, dp[full], ways[full] == 1, /*exact=*/true);
}

ConsensusRanking kemeny_local_search(const std::vector<std::vector<std::uint64_t>>& cost,
                                     std::size_t n) {
    // start from mean-rank order, then best-improvement single-item moves
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::uint64_t> against(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (j != k) against[j] += cost[j][k];
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (against[a] != against[b]) return against[a] < against[b];
        return a < b;
    });

    std::uint64_t best = order_cost(order, cost);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t from = 0; from < n && !improved; ++from) {
            for (std::size_t to = 0; to < n; ++to) {
                if (to == from) continue;
                std::vector<std::size_t> trial = order;
                const std::size_t item = trial[from];
                trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(from));
                trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(to), item);
                const std::uint64_t c = order_cost(trial, cost);
                if (c < best) {
                    best = c;
                    order = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
    }
    return from_order(order, best, /*unique=*/false, /*exact=*/false);
}

} // namespace

ConsensusRanking kemeny_young(const std::vector<std::vector<std::size_t>>& rankings,
                              std::size_t exact_cutoff) {
    if (rankings.empty()) throw InputError("consensus of zero rankings");
    const std::size_t n = rankings.front().size();
    if (n == 0) throw InputError("consensus over zero items");
    for (const auto& r : rankings)
        if (r.size() != n) throw ShapeError("ranking vectors have unequal length");

    const auto cost = pairwise_cost(rankings, n);
    if (n <= exact_cutoff && n < 26) return kemeny_exact(cost, n);
    return kemeny_local_search(cost, n);
}

ConsensusRanking aggregate_table(const ScoreTable& table,
                                 std::span<const std::string> columns) {
    if (columns.empty()) throw InputError("no columns selected for aggregation");
    std::vector<std::size_t> cols;
    for (const auto& id : columns) cols.push_back(table.column_index(id));

    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < table.row_ids.size(); ++r) {
        const bool complete = std::all_of(cols.begin(), cols.end(), [&](std::size_t c) {
            return table.cells[r][c].has_value();
        });
        if (complete) rows.push_back(r);
    }
    if (rows.empty()) throw InputError("no rows with complete data in selected columns");

    std::vector<std::vector<std::size_t>> rankings;
    for (std::size_t c : cols) {
        std::vector<double> scores;
        scores.reserve(rows.size());
        for (std::size_t r : rows) scores.push_back(*table.cells[r][c]);
        rankings.push_back(scores_to_ranking(scores, table.higher_better[c]));
    }

    ConsensusRanking out = kemeny_young(rankings);
    for (std::size_t r : rows) out.row_ids.push_back(table.row_ids[r]);
    return out;
}

} // namespace advsens
