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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>

#include "advsens/attacks.hpp"
#include "advsens/errors.hpp"
#include "advsens/trainer.hpp"
#include "test_util.hpp"

using namespace advsens;
using advsens::testing::binary_linear;
using advsens::testing::constant_model;
using advsens::testing::tok;

namespace {

/// Small hand-built table: one "quality" cluster on axis 0 with a valence
/// component on axis 2, one "film" cluster on axis 1, and an isolated
/// word with no neighbors.
EmbeddingTable test_table() {
    return EmbeddingTable({
        {"great", {1.0, 0.0, 0.2}},
        {"bad", {1.0, 0.0, -0.2}},
        {"okay", {1.0, 0.0, 0.0}},
        {"meh", {1.0, 0.0, -0.05}},
        {"far", {1.0, 0.0, 1.5}},
        {"film", {0.0, 1.0, 0.0}},
        {"movie", {0.0, 1.0, 0.05}},
        {"cast", {0.0, 1.0, -0.05}},
        {"the", {0.0, 1.0, 0.1}},
        {"was", {0.0, 1.0, -0.1}},
        {"isolated", {-1.0, -1.0, 0.0}},
    });
}

AttackConfig lenient_cfg() {
    AttackConfig cfg;
    cfg.sent_sim_threshold = -1.0; // isolate candidate semantics from the filter
    cfg.a2_sent_sim_threshold = -1.0;
    return cfg;
}

/// Forwards to an inner model while counting queried texts.
class CountingModel : public TextModel {
public:
    explicit CountingModel(ModelHandle inner) : inner_(std::move(inner)) {}
    std::size_t class_count() const override { return inner_.class_count(); }
    const std::vector<std::string>& class_labels() const override {
        return inner_.class_labels();
    }
    std::vector<Prediction> predict_batch(
        std::span<const std::string> texts) const override {
        queries_ += texts.size();
        return inner_.predict_batch(texts);
    }
    std::size_t queries() const { return queries_.load(); }

private:
    ModelHandle inner_;
    mutable std::atomic<std::size_t> queries_{0};
};

Lexicon test_names() { return Lexicon({"john", "mary", "carla", "simon"}); }
Lexicon test_locations() { return Lexicon({"paris", "tokyo", "berlin"}); }

} // namespace

TEST_CASE("deletion importance scores evidence tokens and excludes stopwords") {
    const ModelHandle m = binary_linear({{"gem", 2.0}});
    const TokenSequence x = tok("a gem today");
    const auto scores = word_importance_by_deletion(m, x);
    REQUIRE(scores.size() == 3);
    CHECK(scores[0] == -std::numeric_limits<double>::infinity()); // "a" stopword
    CHECK(scores[1] > 0.0);
    CHECK(scores[2] == doctest::Approx(0.0)); // model ignores "today"
    CHECK(scores[1] == *std::max_element(scores.begin(), scores.end()));
}

TEST_CASE("unk importance differs from deletion under mean pooling") {
    // two equal tokens: deleting one leaves the mean unchanged, blanking
    // one halves it
    const std::size_t dim = 2;
    const std::vector<std::string> vocab = {"pos"};
    const ModelHandle m = ModelHandle::bundled_differentiable(
        std::make_shared<EmbeddingBagModel>(
            std::vector<std::string>(vocab), std::vector<double>{1.0, 0.0},
            std::vector<double>{0.0, 0.0, 2.0, 0.0}, std::vector<double>{0.0, 0.0},
            dim));
    const TokenSequence x = tok("pos pos");
    const auto del = word_importance_by_deletion(m, x);
    const auto unk = word_importance_by_unk(m, x);
    CHECK(del[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(unk[0] > 1e-3);
    CHECK(del[0] != unk[0]);
}

TEST_CASE("word-level candidates come from the table neighborhood") {
    const EmbeddingTable table = test_table();
    const TokenSequence ctx = tok("the film was great");

    SUBCASE("no in-threshold neighbors means no candidates") {
        const auto cands = candidates_a1("isolated", tok("isolated"), 0, table,
                                         lenient_cfg());
        CHECK(cands.empty());
    }
    SUBCASE("unknown words have no candidates") {
        const auto cands = candidates_a1("zebra", ctx, 3, table, lenient_cfg());
        CHECK(cands.empty());
    }
    SUBCASE("the word itself is never proposed and the cap holds") {
        AttackConfig cfg = lenient_cfg();
        cfg.k_candidates = 2;
        const auto cands = candidates_a1("great", ctx, 3, table, cfg);
        CHECK(cands.size() <= 2);
        for (const auto& c : cands) CHECK(c != "great");
    }
    SUBCASE("the sentence-similarity filter drops drifting candidates") {
        AttackConfig strict;
        strict.sent_sim_threshold = 0.84;
        // "far" passes the word-cosine gate but shifts a sparse window
        const auto sparse = candidates_a1("great", tok("great"), 0, table, strict);
        CHECK(std::find(sparse.begin(), sparse.end(), "far") == sparse.end());
        CHECK(std::find(sparse.begin(), sparse.end(), "bad") != sparse.end());
    }
}

TEST_CASE("character-level candidates enumerate the four inner-edit operators") {
    const EmbeddingTable table = test_table();
    const AttackConfig cfg = lenient_cfg();

    SUBCASE("every candidate of a 3-letter word sits at distance exactly 1") {
        AttackConfig one_edit = cfg;
        one_edit.max_edit_distance = 1;
        const auto cands = candidates_a2("cat", tok("cat"), 0, table, one_edit);
        CHECK(!cands.empty());
        for (const auto& c : cands)
            CHECK(levenshtein_distance("cat", c) == 1);
    }
    SUBCASE("adjacent inner swap can produce wrod") {
        const auto cands = candidates_a2("word", tok("word"), 0, table, cfg);
        CHECK(std::find(cands.begin(), cands.end(), "wrod") != cands.end());
    }
    SUBCASE("first and last characters survive every operator") {
        const auto cands = candidates_a2("great", tok("great"), 0, table, cfg);
        CHECK(cands.size() > 50); // swaps, substitutions, deletes, inserts
        for (const auto& c : cands) {
            CHECK(c.front() == 'g');
            CHECK(c.back() == 't');
            CHECK(levenshtein_distance("great", c) <= cfg.max_edit_distance);
        }
    }
    SUBCASE("short words are not perturbed") {
        CHECK(candidates_a2("at", tok("at"), 0, table, cfg).empty());
    }
}

TEST_CASE("greedy search fails cleanly when the label cannot move") {
    const EmbeddingTable table = test_table();
    SUBCASE("constant model never flips") {
        const AdversarialPair p =
            attack_a1(constant_model(), tok("the film was great"), table, lenient_cfg());
        CHECK_FALSE(p.accepted);
        CHECK(p.failure == AttackFailure::NoFlip);
        CHECK(p.edits.empty());
    }
    SUBCASE("all-stopword sentences have nothing to perturb") {
        const ModelHandle m = binary_linear({{"the", 0.5}});
        const AdversarialPair p = attack_a1(m, tok("the of and"), table, lenient_cfg());
        CHECK_FALSE(p.accepted);
        CHECK(p.failure == AttackFailure::NoPerturbablePositions);
    }
}

TEST_CASE("a single confident synonym swap is accepted with one edit") {
    const ModelHandle m = binary_linear({{"great", 3.0}, {"bad", -3.0}});
    const EmbeddingTable table = test_table();
    const AdversarialPair p = attack_a1(m, tok("the film was great"), table, lenient_cfg());
    REQUIRE(p.accepted);
    CHECK(p.failure == AttackFailure::None);
    REQUIRE(p.edits.size() == 1);
    CHECK(p.edits[0].old_token == "great");
    CHECK(p.edits[0].new_token == "bad");
    CHECK(p.adversarial.source_text == "the film was bad");
    CHECK(p.original_pred.predicted_class != p.adversarial_pred.predicted_class);
    CHECK(p.adversarial_pred.confidence >= 0.7);
    REQUIRE(p.constraints.word_cosines.size() == 1);
    CHECK(p.constraints.word_cosines[0] >= 0.5);
}

TEST_CASE("flips below the confidence threshold are rejected") {
    // okay -> meh flips the sign but only reaches sigma(0.619) = 0.65
    const ModelHandle m = binary_linear({{"okay", 0.5}, {"meh", -0.619}});
    const EmbeddingTable table = test_table();
    const AdversarialPair p = attack_a1(m, tok("the film was okay"), table, lenient_cfg());
    CHECK_FALSE(p.accepted);
    CHECK(p.failure == AttackFailure::RejectedLowConfidence);
    CHECK(p.adversarial_pred.confidence < 0.7);
    CHECK(p.adversarial_pred.predicted_class != p.original_pred.predicted_class);
}

TEST_CASE("the incumbent probability never increases along accepted edits") {
    const ModelHandle m = binary_linear(
        {{"great", 1.2}, {"good", 0.9}, {"bad", -1.2}, {"okay", 0.0}, {"meh", -0.2}});
    const EmbeddingTable table = test_table();
    const AdversarialPair p =
        attack_a2(m, tok("the film was great and the cast was okay"), table,
                  lenient_cfg());
    REQUIRE(p.constraints.incumbent_probs.size() >= 1);
    for (std::size_t i = 1; i < p.constraints.incumbent_probs.size(); ++i)
        CHECK(p.constraints.incumbent_probs[i] <
              p.constraints.incumbent_probs[i - 1]);
}

TEST_CASE("A1 stays within the documented query budget") {
    auto counting = std::make_shared<CountingModel>(
        binary_linear({{"great", 3.0}, {"bad", -3.0}}));
    const ModelHandle m(Backend::BundledLinear, counting);
    const EmbeddingTable table = test_table();
    AttackConfig cfg = lenient_cfg();
    const TokenSequence x = tok("the film was great");

    attack_a1(m, x, table, cfg);
    const std::size_t n = x.size();
    CHECK(counting->queries() <= n * (1 + cfg.k_candidates) + n);
}

TEST_CASE("invariance attack substitutes entities in one pass") {
    const Lexicon names = test_names();
    const Lexicon locations = test_locations();
    AttackConfig cfg;
    cfg.seed = 17;

    SUBCASE("no entities, no attack") {
        const ModelHandle m = binary_linear({{"walk", 1.0}});
        const AdversarialPair p =
            attack_a3(m, tok("a quiet morning walk"), names, locations, cfg);
        CHECK_FALSE(p.accepted);
        CHECK(p.failure == AttackFailure::NoEntities);
    }

    SUBCASE("names and locations are each replaced from their own lexicon") {
        const ModelHandle m = binary_linear({{"moved", 0.4}});
        const AdversarialPair p =
            attack_a3(m, tok("critic John moved to Paris"), names, locations, cfg);
        REQUIRE(p.edits.size() == 2);
        CHECK(p.edits[0].old_token == "John");
        CHECK(test_names().contains(to_lower(p.edits[0].new_token)));
        CHECK(std::isupper(static_cast<unsigned char>(p.edits[0].new_token[0])));
        CHECK(p.edits[1].old_token == "Paris");
        CHECK(test_locations().contains(to_lower(p.edits[1].new_token)));
        // the model ignores entities entirely, so this cannot flip
        CHECK(p.failure == AttackFailure::NoFlip);
    }

    SUBCASE("sentence-initial capitalized words are not treated as entities") {
        const ModelHandle m = binary_linear({{"moved", 0.4}});
        const AdversarialPair p = attack_a3(m, tok("John moved on"), names,
                                            locations, cfg);
        CHECK(p.failure == AttackFailure::NoEntities);
    }

    SUBCASE("digit tokens are rewritten and can break a digit-sensitive model") {
        std::map<std::string, double> weights = {{"9", 2.0}};
        for (const char* d : {"0", "1", "2", "3", "4", "5", "6", "7", "8"})
            weights[d] = -2.0;
        const ModelHandle m = binary_linear(weights);
        const AdversarialPair p =
            attack_a3(m, tok("critic rated it 9"), names, locations, cfg);
        REQUIRE(p.edits.size() == 1);
        CHECK(p.edits[0].old_token == "9");
        CHECK(p.edits[0].new_token != "9");
        CHECK(p.accepted);
        CHECK(p.adversarial_pred.confidence >= 0.7);
    }

    SUBCASE("a model trained without entity features never flips") {
        const std::vector<LabeledExample> no_names = {
            {"the film was great", 1},    {"the film was superb", 1},
            {"truly a wonderful film", 1}, {"the film was awful", 0},
            {"the film was terrible", 0}, {"truly a dreadful film", 0},
        };
        ToyTrainConfig train;
        train.seed = 5;
        train.epochs = 400;
        const ModelHandle m = train_toy_classifier(no_names, train);
        const AdversarialPair p = attack_a3(
            m, tok("truly John thought Paris screenings were great"), names,
            locations, cfg);
        CHECK(p.failure == AttackFailure::NoFlip);
        CHECK_FALSE(p.accepted);
    }
}

TEST_CASE("suite statistics follow the accepted-pair semantics") {
    const EmbeddingTable table = test_table();
    const Lexicon names = test_names();
    const Lexicon locations = test_locations();
    const StopwordSet& stop = advsens::testing::stopwords();

    const std::vector<LabeledExample> dataset = {
        {"the film was great", 1}, {"the film was bad", 0},
        {"the movie was great", 1}, {"the movie was bad", 0},
    };

    SUBCASE("zero accepted pairs keeps the post-attack accuracy at clean") {
        const AttackSuiteResult r = run_attack_suite(
            constant_model(), dataset, stop, table, names, locations, AttackConfig{});
        CHECK(r.stats.clean_accuracy == doctest::Approx(0.5)); // constant class 0
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(r.stats.accepted[a] == 0);
            CHECK(r.stats.post_attack_accuracy[a] ==
                  doctest::Approx(r.stats.clean_accuracy));
        }
    }

    SUBCASE("breaking every example drives post-attack accuracy to zero") {
        const ModelHandle m = binary_linear({{"great", 3.0}, {"bad", -3.0}});
        AttackConfig cfg;
        cfg.sent_sim_threshold = -1.0;
        const AttackSuiteResult r =
            run_attack_suite(m, dataset, stop, table, names, locations, cfg);
        CHECK(r.stats.clean_accuracy == doctest::Approx(1.0));
        CHECK(r.stats.accepted[0] == dataset.size()); // A1 flips everything
        CHECK(r.stats.post_attack_accuracy[0] == doctest::Approx(0.0));
    }

    SUBCASE("results are reproducible and worker-count independent") {
        const ModelHandle m = binary_linear({{"great", 3.0}, {"bad", -3.0}});
        AttackConfig cfg;
        cfg.seed = 99;
        cfg.sent_sim_threshold = -1.0;
        const AttackSuiteResult r1 =
            run_attack_suite(m, dataset, stop, table, names, locations, cfg, 1);
        const AttackSuiteResult r2 =
            run_attack_suite(m, dataset, stop, table, names, locations, cfg, 4);
        for (std::size_t a = 0; a < 3; ++a) {
            REQUIRE(r1.pairs[a].size() == r2.pairs[a].size());
            for (std::size_t i = 0; i < r1.pairs[a].size(); ++i) {
                CHECK(r1.pairs[a][i].accepted == r2.pairs[a][i].accepted);
                CHECK(r1.pairs[a][i].adversarial.source_text ==
                      r2.pairs[a][i].adversarial.source_text);
            }
        }
    }
}

TEST_CASE("accepted pairs always satisfy the acceptance contract") {
    const EmbeddingTable table = test_table();
    const Lexicon names = test_names();
    const Lexicon locations = test_locations();
    const ModelHandle m = binary_linear(
        {{"great", 2.0}, {"good", 1.0}, {"okay", 0.1}, {"meh", -0.4},
         {"bad", -2.0}, {"film", 0.2}, {"movie", -0.1}});
    AttackConfig cfg;
    cfg.seed = 3;
    cfg.sent_sim_threshold = -1.0;
    cfg.a2_sent_sim_threshold = -1.0;

    const std::vector<LabeledExample> dataset = {
        {"the film was great", 1},       {"the movie was bad", 0},
        {"a good film and a bad movie", 1}, {"the cast was okay", 1},
        {"critic Mary said it was great", 1},
    };
    const AttackSuiteResult r =
        run_attack_suite(m, dataset, advsens::testing::stopwords(), table, names,
                         locations, cfg);
    for (std::size_t a = 0; a < 3; ++a) {
        for (const auto& p : r.pairs[a]) {
            if (!p.accepted) continue;
            CHECK(p.original_pred.predicted_class != p.adversarial_pred.predicted_class);
            CHECK(p.adversarial_pred.confidence >= cfg.mcp_threshold);
            for (const auto& e : p.edits)
                CHECK_FALSE(p.original.tokens[e.position].is_stopword);
            for (double c : p.constraints.word_cosines) CHECK(c >= cfg.min_word_cos);
            for (std::size_t d : p.constraints.edit_distances)
                CHECK(d <= cfg.max_edit_distance);
        }
    }
}
