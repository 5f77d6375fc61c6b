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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advsens/attacks.hpp"
#include "advsens/consensus.hpp"
#include "advsens/erasure.hpp"
#include "advsens/errors.hpp"
#include "advsens/explainers.hpp"
#include "advsens/model.hpp"
#include "advsens/trainer.hpp"

namespace advsens {

/// A stage of run_experiment failed; the message carries the stage tag.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct ModelSpec {
    std::string backend = "toy"; // toy | linear | remote
    std::string url;             // remote endpoint base URL
    std::size_t remote_class_count = 2;
    std::string weights_path;    // linear: JSON weight file
    ToyTrainConfig train;        // toy
};

struct ExperimentConfig {
    std::string train_dataset;
    std::string eval_dataset; // empty: reuse train_dataset
    std::vector<std::string> explainer_ids;
    ModelSpec model;
    AttackConfig attack;
    ExplainerConfig explainer;
    std::size_t sample_cap = 0;  // attack set size, 0 = all
    std::size_t erasure_cap = 0; // erasure set size, 0 = all
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string output_dir = "advsens_out";
    std::string stopwords_path;
    std::string embeddings_path;
    std::string names_path;
    std::string locations_path;

    /// Reads the declarative JSON config. Relative paths are resolved
    /// against the config file's directory; ADVSENS_SEED in the
    /// environment overrides the seed.
    static ExperimentConfig load(const std::string& path);
};

/// One persisted sensitivity measurement: a pair, both attributions, and
/// the ranking distance between them.
struct SensitivityRecord {
    std::string pair_id;
    std::string attack;
    std::string explainer;
    double distance = 0.0;
    Attribution original_attr;
    Attribution adversarial_attr;
};

struct ErasureRecord {
    std::size_t example_index = 0;
    std::string explainer;
    double comprehensiveness = 0.0;
    double sufficiency = 0.0;
    double loo_tau = 0.0;
};

struct ReportBundle {
    AttackStats attack_stats;
    ScoreTable findings; // rows: explainers; columns: Comp,Suff,LOO,A1,A2,A3
    std::map<std::string, ConsensusRanking> consensus;
    std::vector<std::string> skipped_explainers; // not applicable on this backend
    std::vector<std::string> deviations;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string output_dir;

    std::array<std::vector<AdversarialPair>, 3> pairs;
    std::vector<SensitivityRecord> sensitivity_records;
    std::vector<ErasureRecord> erasure_records;
};

/// Full pipeline: ingest, model setup, attack suite, per-explainer
/// sensitivity and erasure, consensus, persistence of per-example
/// records. Deterministic for a fixed seed. On failure the output
/// directory gets a FAILED marker naming the stage and the error is
/// rethrown as StageError.
ReportBundle run_experiment(const ExperimentConfig& cfg);

/// Writes findings.csv, attack_stats.csv, consensus.json, meta.json and
/// summary.md into bundle.output_dir.
void render_reports(const ReportBundle& bundle);

/// Recomputes every findings cell from the persisted per-example records
/// in `dir` and compares. Returns true when everything matches; appends
/// human-readable mismatch details otherwise.
bool audit_output_dir(const std::string& dir, std::string* detail = nullptr);

/// Builds the model described by a spec ("toy" trains on the given
/// dataset).
ModelHandle build_model(const ModelSpec& spec,
                        const std::vector<LabeledExample>& train_data,
                        std::uint64_t run_seed);

/// Dispatches one attack family on one example.
AdversarialPair attack_one(const ModelHandle& model, const TokenSequence& x,
                           AttackId id, const EmbeddingTable& table,
                           const Lexicon& names, const Lexicon& locations,
                           const AttackConfig& cfg);

/// Writes attack results (accepted and failed) as one JSON object per line.
void save_pairs_jsonl(const std::vector<AdversarialPair>& pairs,
                      const std::string& path);

} // namespace advsens
