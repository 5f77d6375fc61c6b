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

#include "advsens/explainers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <Eigen/Dense>

#include "advsens/errors.hpp"
#include "advsens/rng.hpp"

namespace advsens {

namespace {

void require_nonempty(const TokenSequence& x) {
    if (x.empty()) throw InputError("explainer requires a nonempty input");
}

void require_target(const ModelHandle& model, std::size_t target) {
    if (target >= model.class_count())
        throw InputError("target class out of range");
}

const EmbeddingBagModel& require_differentiable(const ModelHandle& model) {
    const EmbeddingBagModel* m = model.differentiable();
    if (!m)
        throw CapabilityError("gradient explainers need the bundled "
                              "differentiable backend, got " +
                              backend_name(model.backend()));
    return *m;
}

std::string masked_text(const TokenSequence& x, const std::vector<bool>& keep) {
    const bool any = std::any_of(keep.begin(), keep.end(), [](bool b) { return b; });
    if (!any) return std::string(kEmptyMarker);
    return text_with_tokens_kept(x, keep);
}

/// Target-class probability for every mask, one model batch.
std::vector<double> batched_mask_values(const ModelHandle& model,
                                        const TokenSequence& x,
                                        const std::vector<std::vector<bool>>& masks,
                                        std::size_t target) {
    std::vector<std::string> texts;
    texts.reserve(masks.size());
    for (const auto& m : masks) texts.push_back(masked_text(x, m));
    const auto preds = model.predict_batch(texts);
    std::vector<double> values(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) values[i] = preds[i].probs[target];
    return values;
}

} // namespace

Attribution explain_surrogate(const ModelHandle& model, const TokenSequence& x,
                              std::size_t target, const ExplainerConfig& cfg) {
    require_nonempty(x);
    require_target(model, target);
    const std::size_t n = x.size();

    std::vector<std::vector<bool>> masks;
    if (cfg.surrogate_exhaustive) {
        if (n > 16) throw ConfigError("exhaustive surrogate limited to 16 tokens");
        for (std::size_t bits = 0; bits < (1u << n); ++bits) {
            std::vector<bool> m(n);
            for (std::size_t i = 0; i < n; ++i) m[i] = (bits >> i) & 1u;
            masks.push_back(std::move(m));
        }
    } else {
        if (cfg.surrogate_samples < 1) throw ConfigError("surrogate_samples must be >= 1");
        auto rng = make_rng(derive_seed(cfg.seed, "surrogate"));
        masks.emplace_back(n, true); // the unperturbed anchor
        std::uniform_int_distribution<std::size_t> del_count(1, n);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t s = 1; s < cfg.surrogate_samples; ++s) {
            std::shuffle(order.begin(), order.end(), rng);
            const std::size_t k = del_count(rng);
            std::vector<bool> m(n, true);
            for (std::size_t i = 0; i < k; ++i) m[order[i]] = false;
            masks.push_back(std::move(m));
        }
    }

    const std::vector<double> values = batched_mask_values(model, x, masks, target);

    const double width = cfg.surrogate_kernel_width > 0.0
                             ? cfg.surrogate_kernel_width
                             : 0.25 * std::sqrt(static_cast<double>(n));

    // Weighted least squares over presence bits plus an intercept; rows
    // scaled by sqrt of the exponential kernel on Hamming distance.
    Eigen::MatrixXd design(masks.size(), n + 1);
    Eigen::VectorXd response(masks.size());
    for (std::size_t r = 0; r < masks.size(); ++r) {
        std::size_t hamming = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!masks[r][i]) ++hamming;
        const double h = static_cast<double>(hamming) / width;
        const double sw = std::sqrt(std::exp(-h * h));
        for (std::size_t i = 0; i < n; ++i)
            design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) =
                sw * (masks[r][i] ? 1.0 : 0.0);
        design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n)) = sw;
        response(static_cast<Eigen::Index>(r)) = sw * values[r];
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(response);

    Attribution attr;
    attr.explainer_id = "lime";
    attr.target_class = target;
    attr.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        attr.weights[i] = beta(static_cast<Eigen::Index>(i));
    return attr;
}

namespace {

std::vector<double> exact_shapley(const ModelHandle& model, const TokenSequence& x,
                                  std::size_t target) {
    const std::size_t n = x.size();
    if (n > 20) throw ConfigError("exact shapley limited to 20 tokens");
    const std::uint32_t full = (1u << n) - 1u;

    std::vector<std::vector<bool>> masks;
    masks.reserve(full + 1);
    for (std::uint32_t bits = 0; bits <= full; ++bits) {
        std::vector<bool> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = (bits >> i) & 1u;
        masks.push_back(std::move(m));
    }
    const std::vector<double> v = batched_mask_values(model, x, masks, target);

    std::vector<double> fact(n + 1, 1.0);
    for (std::size_t k = 1; k <= n; ++k) fact[k] = fact[k - 1] * static_cast<double>(k);
    std::vector<double> coalition_weight(n); // |S|! (n-1-|S|)! / n!
    for (std::size_t s = 0; s < n; ++s)
        coalition_weight[s] = fact[s] * fact[n - 1 - s] / fact[n];

    std::vector<double> phi(n, 0.0);
    for (std::uint32_t s_bits = 0; s_bits <= full; ++s_bits) {
        const std::size_t s_size = static_cast<std::size_t>(std::popcount(s_bits));
        for (std::size_t i = 0; i < n; ++i) {
            if ((s_bits >> i) & 1u) continue;
            phi[i] += coalition_weight[s_size] * (v[s_bits | (1u << i)] - v[s_bits]);
        }
    }
    return phi;
}

std::vector<double> sampled_shapley(const ModelHandle& model, const TokenSequence& x,
                                    std::size_t target, const ExplainerConfig& cfg) {
    const std::size_t n = x.size();
    if (n > 64) throw ConfigError("shapley sampling limited to 64 tokens");
    auto rng = make_rng(derive_seed(cfg.seed, "shapley-mc"));

    std::unordered_map<std::uint64_t, double> cache;
    auto values_for = [&](const std::vector<std::uint64_t>& keys) {
        std::vector<std::vector<bool>> miss_masks;
        std::vector<std::uint64_t> miss_keys;
        for (std::uint64_t key : keys) {
            if (cache.count(key)) continue;
            std::vector<bool> m(n);
            for (std::size_t i = 0; i < n; ++i) m[i] = (key >> i) & 1u;
            miss_masks.push_back(std::move(m));
            miss_keys.push_back(key);
        }
        if (!miss_masks.empty()) {
            const auto vals = batched_mask_values(model, x, miss_masks, target);
            for (std::size_t i = 0; i < miss_keys.size(); ++i)
                cache[miss_keys[i]] = vals[i];
        }
    };

    values_for({0});
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> phi(n, 0.0);

    for (std::size_t p = 0; p < cfg.shapley_mc_samples; ++p) {
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::uint64_t> prefixes(n);
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mask |= (1ULL << perm[i]);
            prefixes[i] = mask;
        }
        values_for(prefixes);
        double prev = cache[0];
        for (std::size_t i = 0; i < n; ++i) {
            const double cur = cache[prefixes[i]];
            phi[perm[i]] += cur - prev;
            prev = cur;
        }
    }
    for (double& w : phi) w /= static_cast<double>(cfg.shapley_mc_samples);
    return phi;
}

} // namespace

Attribution explain_shapley(const ModelHandle& model, const TokenSequence& x,
                            std::size_t target, const ExplainerConfig& cfg) {
    require_nonempty(x);
    require_target(model, target);
    Attribution attr;
    attr.explainer_id = "shapley";
    attr.target_class = target;
    attr.weights = (x.size() <= cfg.shapley_exact_max_tokens)
                       ? exact_shapley(model, x, target)
                       : sampled_shapley(model, x, target, cfg);
    return attr;
}

Attribution explain_loo(const ModelHandle& model, const TokenSequence& x,
                        std::size_t target) {
    require_nonempty(x);
    require_target(model, target);
    const std::size_t n = x.size();
    std::vector<std::string> texts;
    texts.reserve(n + 1);
    texts.push_back(x.source_text);
    for (std::size_t i = 0; i < n; ++i) {
        std::string t = text_without_token(x, i);
        texts.push_back(t.empty() ? std::string(kEmptyMarker) : std::move(t));
    }
    const auto preds = model.predict_batch(texts);
    Attribution attr;
    attr.explainer_id = "loo";
    attr.target_class = target;
    attr.weights.resize(n);
    const double p_full = preds[0].probs[target];
    for (std::size_t i = 0; i < n; ++i)
        attr.weights[i] = p_full - preds[i + 1].probs[target];
    return attr;
}

namespace {

/// d(target logit)/d(e_i) of the mean-pooled linear head: the target row
/// of the linear layer divided by the token count, identical for every
/// token and every point along a straight-line path.
std::vector<double> pooled_gradient_row(const EmbeddingBagModel& m,
                                        std::size_t target, std::size_t n_tokens) {
    std::vector<double> row = m.linear_row(target);
    for (double& v : row) v /= static_cast<double>(n_tokens);
    return row;
}

} // namespace

PerDimAttribution gradient_per_dim(const ModelHandle& model, const TokenSequence& x,
                                   std::size_t target) {
    require_nonempty(x);
    require_target(model, target);
    const EmbeddingBagModel& m = require_differentiable(model);
    const std::vector<double> row = pooled_gradient_row(m, target, x.size());
    PerDimAttribution out;
    out.target_class = target;
    out.values.assign(x.size(), row);
    return out;
}

PerDimAttribution integrated_gradient_per_dim(const ModelHandle& model,
                                              const TokenSequence& x,
                                              std::size_t target,
                                              const ExplainerConfig& cfg) {
    require_nonempty(x);
    require_target(model, target);
    if (cfg.ig_steps < 1) throw ConfigError("ig_steps must be >= 1");
    const EmbeddingBagModel& m = require_differentiable(model);
    const auto input = m.embed_tokens(x);
    const std::size_t n = input.size();
    const std::size_t dim = m.embedding_dim();

    // Midpoint rule: average the path gradient at (s + 0.5)/steps, then
    // scale by (input - baseline).
    std::vector<std::vector<double>> avg_grad(n, std::vector<double>(dim, 0.0));
    const std::vector<double> grad_row = pooled_gradient_row(m, target, n);
    for (std::size_t s = 0; s < cfg.ig_steps; ++s) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < dim; ++d) avg_grad[i][d] += grad_row[d];
    }
    PerDimAttribution out;
    out.target_class = target;
    out.values.assign(n, std::vector<double>(dim, 0.0));
    const double inv_steps = 1.0 / static_cast<double>(cfg.ig_steps);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d)
            out.values[i][d] =
                (input[i][d] - cfg.ig_baseline) * avg_grad[i][d] * inv_steps;
    return out;
}

Attribution apply_input_gating(const PerDimAttribution& per_dim,
                               const std::vector<std::vector<double>>& embeddings) {
    if (per_dim.values.size() != embeddings.size())
        throw ShapeError("attribution and embedding token counts differ");
    Attribution attr;
    attr.target_class = per_dim.target_class;
    attr.weights.resize(per_dim.values.size());
    for (std::size_t i = 0; i < per_dim.values.size(); ++i) {
        if (per_dim.values[i].size() != embeddings[i].size())
            throw ShapeError("attribution and embedding dimensions differ");
        double acc = 0.0;
        for (std::size_t d = 0; d < embeddings[i].size(); ++d)
            acc += per_dim.values[i][d] * embeddings[i][d];
        attr.weights[i] = acc;
    }
    return attr;
}

Attribution explain_gradient(const ModelHandle& model, const TokenSequence& x,
                             std::size_t target) {
    const PerDimAttribution g = gradient_per_dim(model, x, target);
    Attribution attr;
    attr.explainer_id = "grad";
    attr.target_class = target;
    attr.weights.resize(g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        double sq = 0.0;
        for (double v : g.values[i]) sq += v * v;
        attr.weights[i] = std::sqrt(sq);
    }
    return attr;
}

Attribution explain_integrated_gradient(const ModelHandle& model,
                                        const TokenSequence& x, std::size_t target,
                                        const ExplainerConfig& cfg) {
    const PerDimAttribution g = integrated_gradient_per_dim(model, x, target, cfg);
    Attribution attr;
    attr.explainer_id = "intgrad";
    attr.target_class = target;
    attr.weights.resize(g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i)
        attr.weights[i] = std::accumulate(g.values[i].begin(), g.values[i].end(), 0.0);
    return attr;
}

Attribution explain_grad_x_input(const ModelHandle& model, const TokenSequence& x,
                                 std::size_t target) {
    const EmbeddingBagModel& m = require_differentiable(model);
    Attribution attr =
        apply_input_gating(gradient_per_dim(model, x, target), m.embed_tokens(x));
    attr.explainer_id = "grad_x_input";
    return attr;
}

Attribution explain_intgrad_x_input(const ModelHandle& model, const TokenSequence& x,
                                    std::size_t target, const ExplainerConfig& cfg) {
    const EmbeddingBagModel& m = require_differentiable(model);
    Attribution attr = apply_input_gating(
        integrated_gradient_per_dim(model, x, target, cfg), m.embed_tokens(x));
    attr.explainer_id = "intgrad_x_input";
    return attr;
}

Attribution explain_random(const TokenSequence& x, std::size_t target,
                           std::uint64_t seed) {
    require_nonempty(x);
    auto rng = make_rng(derive_seed(derive_seed(seed, "random-baseline"),
                                    x.source_text));
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    Attribution attr;
    attr.explainer_id = "random";
    attr.target_class = target;
    attr.weights.resize(x.size());
    for (double& w : attr.weights) w = noise(rng);
    return attr;
}

Explainer make_explainer(const std::string& id, const ExplainerConfig& cfg) {
    using Fn = std::function<Attribution(const ModelHandle&, const TokenSequence&, std::size_t)>;
    Fn fn;
    if (id == "lime") {
        fn = [cfg](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_surrogate(m, x, t, cfg);
        };
    } else if (id == "shapley") {
        fn = [cfg](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_shapley(m, x, t, cfg);
        };
    } else if (id == "grad") {
        fn = [](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_gradient(m, x, t);
        };
    } else if (id == "intgrad") {
        fn = [cfg](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_integrated_gradient(m, x, t, cfg);
        };
    } else if (id == "grad_x_input") {
        fn = [](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_grad_x_input(m, x, t);
        };
    } else if (id == "intgrad_x_input") {
        fn = [cfg](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_intgrad_x_input(m, x, t, cfg);
        };
    } else if (id == "loo") {
        fn = [](const ModelHandle& m, const TokenSequence& x, std::size_t t) {
            return explain_loo(m, x, t);
        };
    } else if (id == "random") {
        fn = [cfg](const ModelHandle&, const TokenSequence& x, std::size_t t) {
            return explain_random(x, t, cfg.seed);
        };
    } else {
        throw ConfigError("unknown explainer id: " + id);
    }
    return Explainer{id, std::move(fn)};
}

bool explainer_requires_gradients(const std::string& id) {
    return id == "grad" || id == "intgrad" || id == "grad_x_input" ||
           id == "intgrad_x_input";
}

const std::vector<std::string>& builtin_explainer_ids() {
    static const std::vector<std::string> ids = {
        "lime", "shapley", "grad", "intgrad", "grad_x_input",
        "intgrad_x_input", "loo", "random"};
    return ids;
}

} // namespace advsens
