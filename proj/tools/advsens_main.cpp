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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "advsens/dataset.hpp"
#include "advsens/harness.hpp"
#include "advsens/parallel.hpp"
#include "advsens/rng.hpp"

namespace fs = std::filesystem;
using namespace advsens;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool seed_set, std::uint64_t seed_override) {
    ExperimentConfig cfg = ExperimentConfig::load(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (seed_set) cfg.seed = seed_override;

    ReportBundle bundle = run_experiment(cfg);
    render_reports(bundle);

    std::cout << "clean accuracy " << bundle.attack_stats.clean_accuracy << "\n";
    for (std::size_t a = 0; a < 3; ++a)
        std::cout << attack_name(static_cast<AttackId>(a)) << ": "
                  << bundle.attack_stats.accepted[a] << " accepted pairs, "
                  << "post-attack accuracy "
                  << bundle.attack_stats.post_attack_accuracy[a] << "\n";
    std::cout << "reports written to " << bundle.output_dir << "\n";
    return 0;
}

ModelSpec parse_model_spec(const std::string& spec) {
    ModelSpec out;
    if (spec == "toy") {
        out.backend = "toy";
    } else if (spec.rfind("remote:", 0) == 0) {
        out.backend = "remote";
        out.url = spec.substr(7);
    } else if (spec.rfind("linear:", 0) == 0) {
        out.backend = "linear";
        out.weights_path = spec.substr(7);
    } else {
        throw ConfigError("model spec must be toy | linear:<weights.json> | "
                          "remote:<url>, got: " + spec);
    }
    return out;
}

int cmd_attack(const std::string& model_spec, const std::string& dataset_path,
               const std::string& attack, const std::string& data_dir,
               const std::string& out_path, std::uint64_t seed, std::size_t cap,
               unsigned workers) {
    AttackId id;
    if (attack == "a1") id = AttackId::A1;
    else if (attack == "a2") id = AttackId::A2;
    else if (attack == "a3") id = AttackId::A3;
    else throw ConfigError("attack must be a1|a2|a3, got: " + attack);

    if (const char* env = std::getenv("ADVSENS_SEED")) seed = std::stoull(env);

    auto dataset = load_jsonl(dataset_path);
    if (cap > 0 && dataset.size() > cap) dataset.resize(cap);

    const fs::path data(data_dir);
    const StopwordSet stopwords = StopwordSet::load((data / "stopwords.txt").string());
    const EmbeddingTable table =
        EmbeddingTable::load((data / "mini_embeddings.txt").string());
    const Lexicon names = Lexicon::load((data / "names.txt").string());
    const Lexicon locations = Lexicon::load((data / "locations.txt").string());

    const ModelHandle model = build_model(parse_model_spec(model_spec), dataset, seed);

    AttackConfig cfg;
    cfg.seed = derive_seed(seed, "attacks");

    std::vector<std::string> texts;
    for (const auto& ex : dataset) texts.push_back(ex.text);
    const auto preds = model.predict_batch(texts);

    std::vector<std::size_t> correct;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (preds[i].predicted_class == dataset[i].label) correct.push_back(i);

    std::vector<AdversarialPair> pairs(correct.size());
    parallel_for(correct.size(), workers, [&](std::size_t k) {
        const std::size_t i = correct[k];
        AttackConfig local = cfg;
        local.seed = derive_seed(cfg.seed, i);
        const TokenSequence x = tokenize(dataset[i].text, stopwords);
        AdversarialPair p = attack_one(model, x, id, table, names, locations, local);
        p.pair_id = "ex" + std::to_string(i) + ":" + attack;
        pairs[k] = std::move(p);
    });

    std::size_t accepted = 0;
    for (const auto& p : pairs)
        if (p.accepted) ++accepted;

    if (!out_path.empty()) save_pairs_jsonl(pairs, out_path);
    std::cout << "dataset " << dataset.size() << " examples, "
              << correct.size() << " correctly classified\n"
              << attack << ": " << accepted << " accepted pairs ("
              << (correct.empty() ? 0.0
                                  : 100.0 * static_cast<double>(accepted) /
                                        static_cast<double>(correct.size()))
              << "% of attacked)\n";
    if (!out_path.empty()) std::cout << "pairs written to " << out_path << "\n";
    return 0;
}

int cmd_rank(const std::string& scores_path, const std::string& columns_arg) {
    const ScoreTable table = ScoreTable::load_csv(scores_path);
    std::vector<std::string> columns;
    std::stringstream ss(columns_arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) columns.push_back(item);
    if (columns.empty()) columns = table.column_ids;

    const ConsensusRanking consensus = aggregate_table(table, columns);
    nlohmann::json out{{"columns", columns},
                       {"row_ids", consensus.row_ids},
                       {"ranking", consensus.ranking},
                       {"total_distance", consensus.total_distance},
                       {"unique_optimum", consensus.unique_optimum},
                       {"exact", consensus.exact}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_report(const std::string& in_dir) {
    std::string detail;
    const bool ok = audit_output_dir(in_dir, &detail);
    const ScoreTable findings =
        ScoreTable::load_csv((fs::path(in_dir) / "findings.csv").string());
    std::cout << "findings: " << findings.row_ids.size() << " explainers x "
              << findings.column_ids.size() << " metrics\n";
    std::cout << "audit: " << (ok ? "ok — every cell matches its per-example records"
                                  : "MISMATCH — " + detail)
              << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial-sensitivity evaluation for text explainers"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    std::uint64_t seed_override = 0;
    auto* run = app.add_subcommand("run", "run a full experiment from a config file");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_override, "override the output directory");
    auto* seed_opt = run->add_option("--seed", seed_override, "override the seed");

    std::string model_spec = "toy", dataset_path, attack_kind, out_path;
    std::string data_dir = "data";
    std::uint64_t attack_seed = 0;
    std::size_t cap = 0;
    unsigned workers = 1;
    auto* attack = app.add_subcommand("attack", "run one attack family on a dataset");
    attack->add_option("--model", model_spec, "toy | linear:<weights.json> | remote:<url>");
    attack->add_option("--dataset", dataset_path, "JSONL dataset")->required();
    attack->add_option("--attack", attack_kind, "a1|a2|a3")->required();
    attack->add_option("--data-dir", data_dir, "directory with stopwords/embeddings/lexicons");
    attack->add_option("--out", out_path, "write pairs JSONL here");
    attack->add_option("--seed", attack_seed, "seed");
    attack->add_option("--cap", cap, "use at most this many examples");
    attack->add_option("--workers", workers, "worker threads");

    std::string scores_path, columns_arg;
    auto* rank = app.add_subcommand("rank", "consensus-rank a score table");
    rank->add_option("--scores", scores_path, "score table CSV")->required();
    rank->add_option("--columns", columns_arg, "comma-separated column subset");

    std::string in_dir;
    auto* report = app.add_subcommand("report", "audit and summarize a run directory");
    report->add_option("--in", in_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run))
            return cmd_run(config_path, out_override, seed_opt->count() > 0,
                           seed_override);
        if (app.got_subcommand(attack))
            return cmd_attack(model_spec, dataset_path, attack_kind, data_dir,
                              out_path, attack_seed, cap, workers);
        if (app.got_subcommand(rank)) return cmd_rank(scores_path, columns_arg);
        if (app.got_subcommand(report)) return cmd_report(in_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
