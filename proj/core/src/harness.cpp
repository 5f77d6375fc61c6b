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

#include "advsens/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "advsens/errors.hpp"
#include "advsens/parallel.hpp"
#include "advsens/rankmetrics.hpp"
#include "advsens/remote.hpp"
#include "advsens/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace advsens {

namespace {

const char* kFindingsColumns[6] = {"Comp", "Suff", "LOO", "A1", "A2", "A3"};
const bool kFindingsHigherBetter[6] = {true, false, true, true, true, true};

const std::vector<std::string> kDeviations = {
    "sentence similarity uses the bundled embedding-average table as a "
    "plug-in stand-in for a full sentence encoder",
    "shapley values are token-deletion based (exact for short inputs, "
    "permutation-sampled otherwise) rather than partition-based",
};

std::string resolve_path(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    if (path.is_absolute() || base.empty()) return path.string();
    return (base / path).lexically_normal().string();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

[[noreturn]] void fail_stage(const std::string& stage, const std::string& out_dir,
                             const std::string& what) {
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        std::ofstream f(fs::path(out_dir) / "FAILED");
        f << "stage " << stage << ": " << what << "\n";
    }
    throw StageError(stage, what);
}

template <typename Fn>
auto run_stage(const std::string& name, const std::string& out_dir, Fn&& fn)
    -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        fail_stage(name, out_dir, e.what());
    }
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

json prediction_to_json(const Prediction& p) {
    return json{{"probs", p.probs},
                {"predicted_class", p.predicted_class},
                {"confidence", p.confidence}};
}

json pair_to_json(const AdversarialPair& p) {
    json edits = json::array();
    for (const auto& e : p.edits)
        edits.push_back({{"position", e.position}, {"old", e.old_token}, {"new", e.new_token}});
    return json{
        {"pair_id", p.pair_id},
        {"attack", attack_name(p.attack_id)},
        {"accepted", p.accepted},
        {"failure", failure_name(p.failure)},
        {"original", {{"text", p.original.source_text},
                      {"prediction", prediction_to_json(p.original_pred)}}},
        {"adversarial", {{"text", p.adversarial.source_text},
                         {"prediction", prediction_to_json(p.adversarial_pred)}}},
        {"edits", edits},
        {"constraints", {{"word_cosines", p.constraints.word_cosines},
                         {"edit_distances", p.constraints.edit_distances},
                         {"sentence_sims", p.constraints.sentence_sims},
                         {"incumbent_probs", p.constraints.incumbent_probs}}}};
}

json ranking_to_json(const TokenRanking& r) {
    json out = json::array();
    for (const auto& [item, rank] : r.entries)
        out.push_back({{"surface", item.surface},
                       {"occurrence", item.occurrence},
                       {"rank", rank}});
    return out;
}

ExplainerConfig with_seed(const ExplainerConfig& base, std::uint64_t seed) {
    ExplainerConfig out = base;
    out.seed = seed;
    return out;
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open experiment config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    const fs::path base = fs::path(path).parent_path();

    ExperimentConfig cfg;
    cfg.train_dataset = resolve_path(base, j.value("train_dataset", std::string{}));
    cfg.eval_dataset = resolve_path(base, j.value("eval_dataset", std::string{}));
    cfg.stopwords_path = resolve_path(base, j.value("stopwords", std::string{}));
    cfg.embeddings_path = resolve_path(base, j.value("embeddings", std::string{}));
    cfg.names_path = resolve_path(base, j.value("names", std::string{}));
    cfg.locations_path = resolve_path(base, j.value("locations", std::string{}));
    cfg.output_dir = j.value("output_dir", std::string("advsens_out"));

    cfg.explainer_ids = j.value("explainers", std::vector<std::string>{
        "lime", "shapley", "grad", "intgrad", "grad_x_input", "intgrad_x_input"});

    if (j.contains("model")) {
        const auto& m = j["model"];
        cfg.model.backend = m.value("backend", std::string("toy"));
        cfg.model.url = m.value("url", std::string{});
        cfg.model.remote_class_count = m.value("class_count", std::size_t{2});
        cfg.model.weights_path =
            resolve_path(base, m.value("weights", std::string{}));
        cfg.model.train.embedding_dim =
            m.value("embedding_dim", cfg.model.train.embedding_dim);
        cfg.model.train.epochs = m.value("epochs", cfg.model.train.epochs);
        cfg.model.train.learning_rate =
            m.value("learning_rate", cfg.model.train.learning_rate);
    }
    if (j.contains("attack")) {
        const auto& a = j["attack"];
        cfg.attack.k_candidates = a.value("k_candidates", cfg.attack.k_candidates);
        cfg.attack.min_word_cos = a.value("min_word_cos", cfg.attack.min_word_cos);
        cfg.attack.sent_sim_threshold =
            a.value("sent_sim_threshold", cfg.attack.sent_sim_threshold);
        cfg.attack.sent_sim_window =
            a.value("sent_sim_window", cfg.attack.sent_sim_window);
        cfg.attack.max_edit_distance =
            a.value("max_edit_distance", cfg.attack.max_edit_distance);
        cfg.attack.a2_sent_sim_threshold =
            a.value("a2_sent_sim_threshold", cfg.attack.a2_sent_sim_threshold);
        cfg.attack.mcp_threshold = a.value("mcp_threshold", cfg.attack.mcp_threshold);
    }
    if (j.contains("explainer_config")) {
        const auto& e = j["explainer_config"];
        cfg.explainer.surrogate_samples =
            e.value("surrogate_samples", cfg.explainer.surrogate_samples);
        cfg.explainer.surrogate_kernel_width =
            e.value("surrogate_kernel_width", cfg.explainer.surrogate_kernel_width);
        cfg.explainer.shapley_exact_max_tokens =
            e.value("shapley_exact_max_tokens", cfg.explainer.shapley_exact_max_tokens);
        cfg.explainer.shapley_mc_samples =
            e.value("shapley_mc_samples", cfg.explainer.shapley_mc_samples);
        cfg.explainer.ig_steps = e.value("ig_steps", cfg.explainer.ig_steps);
        cfg.explainer.ig_baseline = e.value("ig_baseline", cfg.explainer.ig_baseline);
    }
    cfg.sample_cap = j.value("sample_cap", std::size_t{0});
    cfg.erasure_cap = j.value("erasure_cap", std::size_t{0});
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.workers = j.value("workers", 1u);

    if (const char* env = std::getenv("ADVSENS_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("ADVSENS_SEED is not an integer: " + std::string(env));
        }
    }

    if (cfg.attack.mcp_threshold <= 0.5 || cfg.attack.mcp_threshold > 1.0)
        throw ConfigError("mcp_threshold must be in (0.5, 1]");
    for (const auto& id : cfg.explainer_ids)
        make_explainer(id, cfg.explainer); // throws ConfigError on bad ids
    return cfg;
}

ModelHandle build_model(const ModelSpec& spec,
                        const std::vector<LabeledExample>& train_data,
                        std::uint64_t run_seed) {
    if (spec.backend == "toy") {
        ToyTrainConfig t = spec.train;
        t.seed = derive_seed(run_seed, "train");
        return train_toy_classifier(train_data, t);
    }
    if (spec.backend == "linear") {
        std::ifstream in(spec.weights_path);
        if (!in) throw ConfigError("cannot open linear weights: " + spec.weights_path);
        json j = json::parse(in);
        const std::size_t classes = j.at("class_count").get<std::size_t>();
        std::map<std::string, std::vector<double>> weights;
        for (const auto& [word, vec] : j.at("weights").items())
            weights[word] = vec.get<std::vector<double>>();
        std::vector<double> bias = j.value("bias", std::vector<double>{});
        std::vector<std::string> labels = j.value("labels", std::vector<std::string>{});
        return ModelHandle::bundled_linear(std::make_shared<LinearBagModel>(
            classes, std::move(weights), std::move(bias), std::move(labels)));
    }
    if (spec.backend == "remote") {
        if (spec.url.empty()) throw ConfigError("remote backend needs a url");
        return make_remote_handle(spec.url, spec.remote_class_count);
    }
    throw ConfigError("unknown model backend: " + spec.backend);
}

AdversarialPair attack_one(const ModelHandle& model, const TokenSequence& x,
                           AttackId id, const EmbeddingTable& table,
                           const Lexicon& names, const Lexicon& locations,
                           const AttackConfig& cfg) {
    switch (id) {
        case AttackId::A1: return attack_a1(model, x, table, cfg);
        case AttackId::A2: return attack_a2(model, x, table, cfg);
        case AttackId::A3: return attack_a3(model, x, names, locations, cfg);
    }
    throw ConfigError("unknown attack id");
}

void save_pairs_jsonl(const std::vector<AdversarialPair>& pairs,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write: " + path);
    for (const auto& p : pairs) out << pair_to_json(p).dump() << "\n";
}

ReportBundle run_experiment(const ExperimentConfig& cfg) {
    ReportBundle bundle;
    bundle.seed = cfg.seed;
    bundle.output_dir = cfg.output_dir;
    bundle.deviations = kDeviations;
    {
        json fingerprint{{"train", cfg.train_dataset},
                         {"eval", cfg.eval_dataset},
                         {"explainers", cfg.explainer_ids},
                         {"backend", cfg.model.backend},
                         {"sample_cap", cfg.sample_cap},
                         {"erasure_cap", cfg.erasure_cap},
                         {"seed", cfg.seed}};
        bundle.config_hash = hex64(fnv1a(fingerprint.dump()));
    }
    if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);

    // --- ingest ---
    StopwordSet stopwords;
    EmbeddingTable table;
    Lexicon names, locations;
    std::vector<LabeledExample> train_data, eval_data;
    run_stage("ingest", cfg.output_dir, [&] {
        stopwords = StopwordSet::load(cfg.stopwords_path);
        table = EmbeddingTable::load(cfg.embeddings_path);
        names = Lexicon::load(cfg.names_path);
        locations = Lexicon::load(cfg.locations_path);
        train_data = load_jsonl(cfg.train_dataset);
        eval_data = (cfg.eval_dataset.empty() || cfg.eval_dataset == cfg.train_dataset)
                        ? train_data
                        : load_jsonl(cfg.eval_dataset);
        if (cfg.sample_cap > 0 && eval_data.size() > cfg.sample_cap)
            eval_data.resize(cfg.sample_cap);
        for (const auto& id : cfg.explainer_ids) make_explainer(id, cfg.explainer);
        return 0;
    });

    // --- model ---
    const ModelHandle model = run_stage("model", cfg.output_dir, [&] {
        return build_model(cfg.model, train_data, cfg.seed);
    });

    for (const auto& id : cfg.explainer_ids)
        if (explainer_requires_gradients(id) && model.differentiable() == nullptr)
            bundle.skipped_explainers.push_back(id);
    auto skipped = [&](const std::string& id) {
        return std::find(bundle.skipped_explainers.begin(),
                         bundle.skipped_explainers.end(),
                         id) != bundle.skipped_explainers.end();
    };

    // --- attacks ---
    AttackConfig attack_cfg = cfg.attack;
    attack_cfg.seed = derive_seed(cfg.seed, "attacks");
    const AttackSuiteResult suite = run_stage("attacks", cfg.output_dir, [&] {
        return run_attack_suite(model, eval_data, stopwords, table, names,
                                locations, attack_cfg, cfg.workers);
    });
    bundle.attack_stats = suite.stats;
    bundle.pairs = suite.pairs;

    // --- sensitivity ---
    struct SensCell {
        std::optional<double> mean;
    };
    std::map<std::string, std::array<SensCell, 3>> sens_cells;
    run_stage("sensitivity", cfg.output_dir, [&] {
        std::array<std::vector<AdversarialPair>, 3> accepted;
        for (std::size_t a = 0; a < 3; ++a)
            accepted[a] = suite.accepted(static_cast<AttackId>(a));

        struct Item {
            std::size_t attack;
            std::string explainer;
            const AdversarialPair* pair;
        };
        std::vector<Item> items;
        for (std::size_t a = 0; a < 3; ++a)
            for (const auto& id : cfg.explainer_ids) {
                if (skipped(id)) continue;
                for (const auto& p : accepted[a]) items.push_back({a, id, &p});
            }

        std::vector<SensitivityRecord> records(items.size());
        parallel_for(items.size(), cfg.workers, [&](std::size_t k) {
            const Item& it = items[k];
            const Explainer ex = make_explainer(
                it.explainer,
                with_seed(cfg.explainer,
                          derive_seed(cfg.seed, "sens:" + it.pair->pair_id + ":" +
                                                    it.explainer)));
            SensitivityRecord rec;
            rec.pair_id = it.pair->pair_id;
            rec.attack = attack_name(it.pair->attack_id);
            rec.explainer = it.explainer;
            rec.original_attr = ex.fn(model, it.pair->original,
                                      it.pair->original_pred.predicted_class);
            rec.adversarial_attr = ex.fn(model, it.pair->adversarial,
                                         it.pair->adversarial_pred.predicted_class);
            rec.distance = sensitivity_distance(
                attribution_to_ranking(rec.original_attr, it.pair->original),
                attribution_to_ranking(rec.adversarial_attr, it.pair->adversarial));
            records[k] = std::move(rec);
        });
        bundle.sensitivity_records = std::move(records);

        for (const auto& id : cfg.explainer_ids) {
            for (std::size_t a = 0; a < 3; ++a) {
                if (skipped(id) || accepted[a].empty()) continue;
                double acc = 0.0;
                std::size_t count = 0;
                for (const auto& r : bundle.sensitivity_records) {
                    if (r.explainer == id && r.attack == attack_name(static_cast<AttackId>(a))) {
                        acc += r.distance;
                        ++count;
                    }
                }
                if (count > 0)
                    sens_cells[id][a].mean = acc / static_cast<double>(count);
            }
        }
        return 0;
    });

    // --- erasure ---
    struct ErasureMeans {
        std::optional<double> comp, suff, loo;
    };
    std::map<std::string, ErasureMeans> erasure_means;
    run_stage("erasure", cfg.output_dir, [&] {
        std::vector<LabeledExample> subset = eval_data;
        if (cfg.erasure_cap > 0 && subset.size() > cfg.erasure_cap)
            subset.resize(cfg.erasure_cap);

        struct Prepared {
            TokenSequence seq;
            std::size_t target = 0;
            Attribution loo;
            bool usable = false;
        };
        std::vector<Prepared> prepared(subset.size());
        parallel_for(subset.size(), cfg.workers, [&](std::size_t i) {
            Prepared p;
            p.seq = tokenize(subset[i].text, stopwords);
            if (!p.seq.empty()) {
                p.target = model.predict(subset[i].text).predicted_class;
                p.loo = explain_loo(model, p.seq, p.target);
                p.usable = true;
            }
            prepared[i] = std::move(p);
        });

        struct Item {
            std::size_t example;
            std::string explainer;
        };
        std::vector<Item> items;
        for (const auto& id : cfg.explainer_ids) {
            if (skipped(id)) continue;
            for (std::size_t i = 0; i < prepared.size(); ++i)
                if (prepared[i].usable) items.push_back({i, id});
        }

        std::vector<ErasureRecord> records(items.size());
        parallel_for(items.size(), cfg.workers, [&](std::size_t k) {
            const Item& it = items[k];
            const Prepared& p = prepared[it.example];
            const Explainer ex = make_explainer(
                it.explainer,
                with_seed(cfg.explainer,
                          derive_seed(cfg.seed, "erasure:" +
                                                    std::to_string(it.example) + ":" +
                                                    it.explainer)));
            const Attribution attr = ex.fn(model, p.seq, p.target);
            ErasureRecord rec;
            rec.example_index = it.example;
            rec.explainer = it.explainer;
            rec.comprehensiveness = comprehensiveness(model, p.seq, attr);
            rec.sufficiency = sufficiency(model, p.seq, attr);
            rec.loo_tau = loo_correlation(attr, p.loo);
            records[k] = rec;
        });
        bundle.erasure_records = std::move(records);

        for (const auto& id : cfg.explainer_ids) {
            if (skipped(id)) continue;
            double c = 0, s = 0, l = 0;
            std::size_t count = 0;
            for (const auto& r : bundle.erasure_records) {
                if (r.explainer != id) continue;
                c += r.comprehensiveness;
                s += r.sufficiency;
                l += r.loo_tau;
                ++count;
            }
            if (count > 0) {
                auto& m = erasure_means[id];
                m.comp = c / static_cast<double>(count);
                m.suff = s / static_cast<double>(count);
                m.loo = l / static_cast<double>(count);
            }
        }
        return 0;
    });

    // --- findings table ---
    // Cells are rounded to the CSV precision so the persisted table, the
    // consensus below, and any re-aggregation from disk agree exactly.
    bundle.findings.row_ids = cfg.explainer_ids;
    bundle.findings.column_ids.assign(std::begin(kFindingsColumns),
                                      std::end(kFindingsColumns));
    bundle.findings.higher_better.assign(std::begin(kFindingsHigherBetter),
                                         std::end(kFindingsHigherBetter));
    for (const auto& id : cfg.explainer_ids) {
        std::vector<std::optional<double>> row(6);
        if (!skipped(id)) {
            if (auto it = erasure_means.find(id); it != erasure_means.end()) {
                if (it->second.comp) row[0] = round6(*it->second.comp);
                if (it->second.suff) row[1] = round6(*it->second.suff);
                if (it->second.loo) row[2] = round6(*it->second.loo);
            }
            if (auto it = sens_cells.find(id); it != sens_cells.end())
                for (std::size_t a = 0; a < 3; ++a)
                    if (it->second[a].mean) row[3 + a] = round6(*it->second[a].mean);
        }
        bundle.findings.cells.push_back(std::move(row));
    }

    // --- consensus ---
    run_stage("consensus", cfg.output_dir, [&] {
        auto available = [&](std::initializer_list<const char*> wanted) {
            std::vector<std::string> out;
            for (const char* id : wanted) {
                const std::size_t c = bundle.findings.column_index(id);
                for (const auto& row : bundle.findings.cells) {
                    if (row[c].has_value()) {
                        out.emplace_back(id);
                        break;
                    }
                }
            }
            return out;
        };
        const std::map<std::string, std::vector<std::string>> groups = {
            {"adv_sens", available({"A1", "A2", "A3"})},
            {"erasure_comp_suff", available({"Comp", "Suff"})},
            {"erasure_loo", available({"LOO"})},
            {"erasure_all", available({"Comp", "Suff", "LOO"})},
        };
        for (const auto& [name, cols] : groups) {
            if (cols.empty()) continue;
            try {
                bundle.consensus[name] = aggregate_table(bundle.findings, cols);
            } catch (const InputError&) {
                // no rows with complete data; group omitted
            }
        }
        return 0;
    });

    // --- persist per-example records ---
    if (!cfg.output_dir.empty()) {
        run_stage("persist", cfg.output_dir, [&] {
            const fs::path dir(cfg.output_dir);
            {
                std::vector<AdversarialPair> all;
                for (const auto& vec : bundle.pairs)
                    for (const auto& p : vec) all.push_back(p);
                save_pairs_jsonl(all, (dir / "pairs.jsonl").string());
            }
            {
                std::unordered_map<std::string, const AdversarialPair*> by_id;
                for (const auto& vec : bundle.pairs)
                    for (const auto& p : vec) by_id[p.pair_id] = &p;
                std::ofstream out(dir / "records.jsonl", std::ios::binary);
                for (const auto& r : bundle.sensitivity_records) {
                    auto found = by_id.find(r.pair_id);
                    const AdversarialPair* pair =
                        found == by_id.end() ? nullptr : found->second;
                    json line{{"pair_id", r.pair_id},
                              {"attack", r.attack},
                              {"explainer", r.explainer},
                              {"distance", r.distance},
                              {"original", {{"target_class", r.original_attr.target_class},
                                            {"weights", r.original_attr.weights}}},
                              {"adversarial", {{"target_class", r.adversarial_attr.target_class},
                                               {"weights", r.adversarial_attr.weights}}}};
                    if (pair) {
                        line["original"]["ranking"] = ranking_to_json(
                            attribution_to_ranking(r.original_attr, pair->original));
                        line["adversarial"]["ranking"] = ranking_to_json(
                            attribution_to_ranking(r.adversarial_attr, pair->adversarial));
                    }
                    out << line.dump() << "\n";
                }
            }
            {
                std::ofstream out(dir / "erasure_records.jsonl", std::ios::binary);
                for (const auto& r : bundle.erasure_records) {
                    out << json{{"example_index", r.example_index},
                                {"explainer", r.explainer},
                                {"comprehensiveness", r.comprehensiveness},
                                {"sufficiency", r.sufficiency},
                                {"loo_tau", r.loo_tau}}
                               .dump()
                        << "\n";
                }
            }
            return 0;
        });
    }
    return bundle;
}

namespace {

json consensus_to_json(const ConsensusRanking& c,
                       const std::vector<std::string>& columns) {
    return json{{"columns", columns},
                {"row_ids", c.row_ids},
                {"ranking", c.ranking},
                {"total_distance", c.total_distance},
                {"unique_optimum", c.unique_optimum},
                {"exact", c.exact}};
}

/// Column set a persisted consensus group was computed from.
std::vector<std::string> group_columns(const std::string& name,
                                       const ScoreTable& findings) {
    auto available = [&](std::initializer_list<const char*> wanted) {
        std::vector<std::string> out;
        for (const char* id : wanted) {
            const std::size_t c = findings.column_index(id);
            for (const auto& row : findings.cells)
                if (row[c].has_value()) {
                    out.emplace_back(id);
                    break;
                }
        }
        return out;
    };
    if (name == "adv_sens") return available({"A1", "A2", "A3"});
    if (name == "erasure_comp_suff") return available({"Comp", "Suff"});
    if (name == "erasure_loo") return available({"LOO"});
    if (name == "erasure_all") return available({"Comp", "Suff", "LOO"});
    return {};
}

void write_summary_md(const ReportBundle& bundle, const fs::path& dir) {
    std::ofstream out(dir / "summary.md", std::ios::binary);
    out << "# advsens run summary\n\n";
    out << "seed: " << bundle.seed << "  \n";
    out << "config hash: " << bundle.config_hash << "\n\n";

    const auto& st = bundle.attack_stats;
    out << "## Accuracy before and after attacks\n\n";
    out << "| | clean | A1 | A2 | A3 |\n|---|---|---|---|---|\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", st.clean_accuracy);
    out << "| accuracy | " << buf;
    for (std::size_t a = 0; a < 3; ++a) {
        std::snprintf(buf, sizeof(buf), "%.4f", st.post_attack_accuracy[a]);
        out << " | " << buf;
    }
    out << " |\n| accepted pairs | - | " << st.accepted[0] << " | " << st.accepted[1]
        << " | " << st.accepted[2] << " |\n\n";

    out << "## Findings\n\n| explainer";
    for (const auto& c : bundle.findings.column_ids) out << " | " << c;
    out << " |\n|---";
    for (std::size_t c = 0; c < bundle.findings.column_ids.size(); ++c) out << "|---";
    out << "|\n";
    for (std::size_t r = 0; r < bundle.findings.row_ids.size(); ++r) {
        out << "| " << bundle.findings.row_ids[r];
        for (const auto& cell : bundle.findings.cells[r]) {
            if (cell) {
                std::snprintf(buf, sizeof(buf), "%.4f", *cell);
                out << " | " << buf;
            } else {
                out << " | attack-failed/NA";
            }
        }
        out << " |\n";
    }

    out << "\n## Consensus rankings\n\n";
    if (bundle.consensus.empty()) out << "(none computed)\n";
    for (const auto& [name, c] : bundle.consensus) {
        out << "- **" << name << "** over [";
        for (std::size_t i = 0; i < c.row_ids.size(); ++i)
            out << (i ? ", " : "") << c.row_ids[i];
        out << "]: ranking [";
        for (std::size_t i = 0; i < c.ranking.size(); ++i)
            out << (i ? "," : "") << c.ranking[i];
        std::snprintf(buf, sizeof(buf), "%.1f", c.total_distance);
        out << "], total distance " << buf << (c.exact ? ", exact" : ", heuristic")
            << (c.unique_optimum ? ", unique" : ", tied optima") << "\n";
    }

    if (!bundle.skipped_explainers.empty()) {
        out << "\n## Not applicable on this backend\n\n";
        for (const auto& id : bundle.skipped_explainers)
            out << "- " << id << " (needs gradients)\n";
    }

    out << "\n## Stand-ins and deviations\n\n";
    for (const auto& d : bundle.deviations) out << "- " << d << "\n";
}

} // namespace

void render_reports(const ReportBundle& bundle) {
    if (bundle.output_dir.empty()) throw ConfigError("report bundle has no output dir");
    const fs::path dir(bundle.output_dir);
    fs::create_directories(dir);

    bundle.findings.save_csv((dir / "findings.csv").string());

    {
        std::ofstream out(dir / "attack_stats.csv", std::ios::binary);
        out << "attack,total_examples,correctly_classified,clean_accuracy,"
               "attacked,accepted_pairs,post_attack_accuracy\n";
        const auto& st = bundle.attack_stats;
        char buf[64];
        for (std::size_t a = 0; a < 3; ++a) {
            out << attack_name(static_cast<AttackId>(a)) << "," << st.total << ","
                << st.correct << ",";
            std::snprintf(buf, sizeof(buf), "%.6f", st.clean_accuracy);
            out << buf << "," << st.attempted[a] << "," << st.accepted[a] << ",";
            std::snprintf(buf, sizeof(buf), "%.6f", st.post_attack_accuracy[a]);
            out << buf << "\n";
        }
    }
    {
        json groups = json::object();
        for (const auto& [name, c] : bundle.consensus)
            groups[name] = consensus_to_json(c, group_columns(name, bundle.findings));
        json doc{{"groups", groups}, {"explainers", bundle.findings.row_ids}};
        std::ofstream out(dir / "consensus.json", std::ios::binary);
        out << doc.dump(2) << "\n";
    }
    {
        json meta{{"seed", bundle.seed},
                  {"config_hash", bundle.config_hash},
                  {"deviations", bundle.deviations},
                  {"skipped_explainers", bundle.skipped_explainers}};
        std::ofstream out(dir / "meta.json", std::ios::binary);
        out << meta.dump(2) << "\n";
    }
    write_summary_md(bundle, dir);
}

bool audit_output_dir(const std::string& dir, std::string* detail) {
    const fs::path base(dir);
    const ScoreTable findings = ScoreTable::load_csv((base / "findings.csv").string());

    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> sens;
    {
        std::ifstream in(base / "records.jsonl");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            auto& slot = sens[{j.at("explainer").get<std::string>(),
                               j.at("attack").get<std::string>()}];
            slot.first += j.at("distance").get<double>();
            slot.second += 1;
        }
    }
    std::map<std::string, std::array<std::pair<double, std::size_t>, 3>> erasure;
    {
        std::ifstream in(base / "erasure_records.jsonl");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            auto& slots = erasure[j.at("explainer").get<std::string>()];
            slots[0].first += j.at("comprehensiveness").get<double>();
            slots[1].first += j.at("sufficiency").get<double>();
            slots[2].first += j.at("loo_tau").get<double>();
            for (auto& s : slots) s.second += 1;
        }
    }

    bool ok = true;
    auto mismatch = [&](const std::string& what) {
        ok = false;
        if (detail) {
            if (!detail->empty()) *detail += "; ";
            *detail += what;
        }
    };
    auto check_cell = [&](const std::string& row, const std::string& col,
                          const std::optional<double>& cell,
                          const std::pair<double, std::size_t>& agg) {
        if (agg.second == 0) {
            if (cell) mismatch(row + "/" + col + ": cell present but no records");
            return;
        }
        const double mean = agg.first / static_cast<double>(agg.second);
        if (!cell) {
            mismatch(row + "/" + col + ": records present but cell is NA");
        } else if (std::abs(*cell - mean) > 1e-6) {
            mismatch(row + "/" + col + ": cell " + std::to_string(*cell) +
                     " != recomputed " + std::to_string(mean));
        }
    };

    for (std::size_t r = 0; r < findings.row_ids.size(); ++r) {
        const std::string& id = findings.row_ids[r];
        const auto era = erasure.find(id);
        const std::array<std::pair<double, std::size_t>, 3> empty{};
        const auto& slots = era == erasure.end() ? empty : era->second;
        check_cell(id, "Comp", findings.cells[r][findings.column_index("Comp")], slots[0]);
        check_cell(id, "Suff", findings.cells[r][findings.column_index("Suff")], slots[1]);
        check_cell(id, "LOO", findings.cells[r][findings.column_index("LOO")], slots[2]);
        for (const char* attack : {"A1", "A2", "A3"}) {
            auto it = sens.find({id, attack});
            const std::pair<double, std::size_t> agg =
                it == sens.end() ? std::pair<double, std::size_t>{0.0, 0} : it->second;
            check_cell(id, attack, findings.cells[r][findings.column_index(attack)], agg);
        }
    }
    return ok;
}

} // namespace advsens
