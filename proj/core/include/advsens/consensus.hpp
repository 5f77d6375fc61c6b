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

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace advsens {

/// Explainer-by-metric score matrix with a per-column direction flag.
/// Cells may be missing (failed attacks report no score, not zero).
struct ScoreTable {
    std::vector<std::string> row_ids;
    std::vector<std::string> column_ids;
    std::vector<bool> higher_better;
    std::vector<std::vector<std::optional<double>>> cells; // rows x columns

    std::size_t column_index(const std::string& id) const;
    bool column_complete(std::size_t col) const;

    /// CSV with a `direction` row after the header; missing cells are
    /// written as NA.
    void save_csv(const std::string& path) const;
    static ScoreTable load_csv(const std::string& path);
    std::string to_csv() const;
    static ScoreTable from_csv(const std::string& text);
};

/// Competition ranks from scores: rank 1 is the best score (largest for
/// higher-better columns, smallest otherwise); equal scores share a rank.
/// Throws InputError on NaN.
std::vector<std::size_t> scores_to_ranking(std::span<const double> scores,
                                           bool higher_better);

struct ConsensusRanking {
    /// Rank per row in row order (1 = best); a strict permutation.
    std::vector<std::size_t> ranking;
    /// Summed pairwise disagreement of the consensus with the inputs
    /// (opposite strict order = 1, tie against strict = 1/2).
    double total_distance = 0.0;
    bool unique_optimum = true;
    bool exact = true;
    /// Rows the consensus covers (meaningful for aggregate_table).
    std::vector<std::string> row_ids;
};

/// Strict-order consensus minimizing the summed pairwise disagreement
/// with the input rankings (which may contain competition ties). Exact
/// subset-DP search up to exact_cutoff items, ties among optima broken by
/// lexicographically smallest order; above the cutoff a local-search
/// heuristic runs and the result is flagged non-exact.
ConsensusRanking kemeny_young(const std::vector<std::vector<std::size_t>>& rankings,
                              std::size_t exact_cutoff = 12);

/// Ranks each selected column with its direction flag, then aggregates
/// with kemeny_young. Rows missing a value in any selected column are
/// excluded; throws InputError when fewer than one row survives or a
/// selected column does not exist.
ConsensusRanking aggregate_table(const ScoreTable& table,
                                 std::span<const std::string> columns);

} // namespace advsens
