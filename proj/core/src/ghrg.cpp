#include "netcp/ghrg.hpp"

#include "netcp/error.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace netcp {

PairCounter::PairCounter(const Dendrogram& tree) : n_(tree.leaf_count()), lca_(tree.lca_table()) {
    pairs_.resize(tree.internal_count());
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
        pairs_[k] = tree.possible_pairs(k);
    }
}

PairCounts PairCounter::count(const GraphSnapshot& g) const {
    if (g.vertex_count() != n_) {
        throw InvalidArgument("graph has " + std::to_string(g.vertex_count()) + " vertices but the tree has " +
                              std::to_string(n_) + " leaves");
    }
    PairCounts out{std::vector<std::int64_t>(pairs_.size(), 0), pairs_};
    for (const auto& e : g.edges()) {
        ++out.edges[lca_[e.u * n_ + e.v]];
    }
    return out;
}

PairCounts count_pairs(const Dendrogram& tree, const GraphSnapshot& g) {
    return PairCounter(tree).count(g);
}

double log_likelihood(std::span<const double> probs, const PairCounts& counts) {
    if (probs.size() != counts.size()) {
        throw InvalidArgument("need one probability per internal node");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const auto e = static_cast<double>(counts.edges[k]);
        const auto absent = static_cast<double>(counts.pairs[k] - counts.edges[k]);
        const double p = probs[k];
        if (e > 0) {
            total += e * std::log(p);
        }
        if (absent > 0) {
            total += absent * std::log1p(-p);
        }
    }
    return total;
}

double log_likelihood(const Dendrogram& tree, std::span<const double> probs, const GraphSnapshot& g) {
    if (probs.size() != tree.internal_count()) {
        throw InvalidArgument("need one probability per internal node");
    }
    return log_likelihood(probs, count_pairs(tree, g));
}

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

void check_prior(BetaParams p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw InvalidArgument("Beta hyperparameters must be positive");
    }
}

} // namespace

double log_beta_binomial(std::int64_t edges, std::int64_t pairs, BetaParams prior) {
    if (edges < 0 || pairs < edges) {
        throw InvalidArgument("edge counts must satisfy 0 <= E <= N");
    }
    if (pairs == 0) {
        return 0.0;
    }
    const auto e = static_cast<double>(edges);
    const auto absent = static_cast<double>(pairs - edges);
    return log_beta(e + prior.alpha, absent + prior.beta) - log_beta(prior.alpha, prior.beta);
}

double log_marginal(const PairCounts& counts, BetaParams prior) {
    check_prior(prior);
    double total = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        total += log_beta_binomial(counts.edges[k], counts.pairs[k], prior);
    }
    return total;
}

double log_marginal(const Dendrogram& tree, const PairCounts& counts, BetaParams prior) {
    if (counts.size() != tree.internal_count()) {
        throw InvalidArgument("counts do not match the tree");
    }
    return log_marginal(counts, prior);
}

double log_marginal(const PairCounts& counts, std::span<const BetaParams> params) {
    if (params.size() != counts.size()) {
        throw InvalidArgument("need one Beta per internal node");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        total += log_beta_binomial(counts.edges[k], counts.pairs[k], params[k]);
    }
    return total;
}

std::vector<BetaParams> posterior_update(BetaParams prior, std::span<const PairCounts> counts,
                                         std::size_t node_count) {
    check_prior(prior);
    std::vector<BetaParams> out(node_count, prior);
    for (const auto& c : counts) {
        if (c.size() != node_count || c.pairs.size() != node_count) {
            throw InvalidArgument("counts come from different trees");
        }
        for (std::size_t k = 0; k < node_count; ++k) {
            if (c.pairs[k] != counts.front().pairs[k]) {
                throw InvalidArgument("counts come from different trees");
            }
            if (c.edges[k] < 0 || c.edges[k] > c.pairs[k]) {
                throw InvalidArgument("edge counts must satisfy 0 <= E <= N");
            }
            out[k].alpha += static_cast<double>(c.edges[k]);
            out[k].beta += static_cast<double>(c.pairs[k] - c.edges[k]);
        }
    }
    return out;
}

std::vector<BetaParams> posterior_update(BetaParams prior, std::span<const PairCounts> counts) {
    return posterior_update(prior, counts, counts.empty() ? 0 : counts.front().size());
}

GhrgModel::GhrgModel(Dendrogram tree, std::vector<BetaParams> params)
    : tree_(std::move(tree)), params_(std::move(params)) {
    if (params_.size() != tree_.internal_count()) {
        throw InvalidArgument("need one Beta per internal node");
    }
    for (const auto& p : params_) {
        check_prior(p);
    }
}

std::vector<double> GhrgModel::mean_probabilities() const {
    std::vector<double> out;
    out.reserve(params_.size());
    for (const auto& p : params_) {
        out.push_back(posterior_mean(p));
    }
    return out;
}

std::vector<double> GhrgModel::draw_probabilities(Rng& rng) const {
    std::vector<double> out;
    out.reserve(params_.size());
    for (const auto& p : params_) {
        std::gamma_distribution<double> ga(p.alpha, 1.0);
        std::gamma_distribution<double> gb(p.beta, 1.0);
        const double x = ga(rng);
        const double y = gb(rng);
        out.push_back(x + y > 0.0 ? x / (x + y) : posterior_mean(p));
    }
    return out;
}

namespace {

// Visits every vertex pair grouped by lowest common ancestor, in a fixed order,
// drawing one Bernoulli per pair.
template <typename OnEdge>
void draw_pairs(const Dendrogram& tree, std::span<const double> probs, Rng& rng, OnEdge&& on_edge) {
    if (probs.size() != tree.internal_count()) {
        throw InvalidArgument("need one probability per internal node");
    }
    for (std::size_t k = 0; k < tree.internal_count(); ++k) {
        const double p = probs[k];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("edge probability outside [0, 1]");
        }
        const auto kids = tree.children(tree.internal_id(k));
        for (std::size_t i = 0; i < kids.size(); ++i) {
            for (std::size_t j = i + 1; j < kids.size(); ++j) {
                for (auto u : tree.leaves(kids[i])) {
                    for (auto v : tree.leaves(kids[j])) {
                        if (uniform01(rng) < p) {
                            on_edge(k, u, v);
                        }
                    }
                }
            }
        }
    }
}

} // namespace

GraphSnapshot sample_graph(const Dendrogram& tree, std::span<const double> probs, Rng& rng, TimeStep time) {
    std::vector<Edge> edges;
    draw_pairs(tree, probs, rng, [&](std::size_t, Dendrogram::NodeId u, Dendrogram::NodeId v) {
        edges.push_back(Edge{std::min(u, v), std::max(u, v)});
    });
    return GraphSnapshot(time, tree.leaf_count(), std::move(edges));
}

GraphSnapshot sample_graph(const GhrgModel& model, Rng& rng, TimeStep time) {
    return sample_graph(model.tree(), model.mean_probabilities(), rng, time);
}

PairCounts sample_counts(const Dendrogram& tree, std::span<const double> probs, Rng& rng) {
    PairCounts out{std::vector<std::int64_t>(tree.internal_count(), 0), {}};
    out.pairs.reserve(tree.internal_count());
    for (std::size_t k = 0; k < tree.internal_count(); ++k) {
        out.pairs.push_back(tree.possible_pairs(k));
    }
    draw_pairs(tree, probs, rng, [&](std::size_t k, Dendrogram::NodeId, Dendrogram::NodeId) { ++out.edges[k]; });
    return out;
}

} // namespace netcp
