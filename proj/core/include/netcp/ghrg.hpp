#pragma once

#include "netcp/dendrogram.hpp"
#include "netcp/graph.hpp"
#include "netcp/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace netcp {

/// Beta(alpha, beta) pseudo-counts of present and absent edges.
struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

/// Per-internal-node edge counts E_r and possible-pair counts N_r, indexed by
/// internal ordinal.
struct PairCounts {
    std::vector<std::int64_t> edges;
    std::vector<std::int64_t> pairs;

    std::size_t size() const noexcept { return edges.size(); }
    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

/// Precomputed lowest-common-ancestor lookup for counting many graphs
/// against one tree.
class PairCounter {
public:
    explicit PairCounter(const Dendrogram& tree);

    /// Throws InvalidArgument if the graph's vertex count differs from the tree's leaf count.
    PairCounts count(const GraphSnapshot& g) const;

private:
    std::size_t n_;
    std::vector<std::int64_t> pairs_;
    std::vector<std::uint32_t> lca_;
};

PairCounts count_pairs(const Dendrogram& tree, const GraphSnapshot& g);

/// log p(G | T, {p_r}) = sum_r E_r log p_r + (N_r - E_r) log(1 - p_r).
/// `probs` is indexed by internal ordinal.
double log_likelihood(const Dendrogram& tree, std::span<const double> probs, const GraphSnapshot& g);
double log_likelihood(std::span<const double> probs, const PairCounts& counts);

/// log of the Beta-Binomial factor for one node with p integrated out:
/// log B(E + a, N - E + b) - log B(a, b). Zero when N == 0.
double log_beta_binomial(std::int64_t edges, std::int64_t pairs, BetaParams prior);

/// Marginal log-likelihood with every p_r integrated against the prior.
double log_marginal(const PairCounts& counts, BetaParams prior);
double log_marginal(const Dendrogram& tree, const PairCounts& counts, BetaParams prior);

/// Same, but with a separate Beta per node (posterior predictive of one graph).
double log_marginal(const PairCounts& counts, std::span<const BetaParams> params);

/// alpha_r = alpha + sum_t E_r(t); beta_r = beta + sum_t (N_r - E_r(t)).
/// All counts must come from the same tree. An empty span yields no nodes.
std::vector<BetaParams> posterior_update(BetaParams prior, std::span<const PairCounts> counts);

/// Same as posterior_update over a sub-range, without copying.
std::vector<BetaParams> posterior_update(BetaParams prior, std::span<const PairCounts> counts,
                                         std::size_t node_count);

inline double posterior_mean(BetaParams p) { return p.alpha / (p.alpha + p.beta); }

/// A dendrogram with one Beta per internal node: a distribution over graphs.
class GhrgModel {
public:
    GhrgModel() = default;
    GhrgModel(Dendrogram tree, std::vector<BetaParams> params);

    const Dendrogram& tree() const noexcept { return tree_; }
    std::span<const BetaParams> params() const noexcept { return params_; }

    /// Posterior-mean edge probability per internal ordinal.
    std::vector<double> mean_probabilities() const;
    /// One Beta draw per internal ordinal.
    std::vector<double> draw_probabilities(Rng& rng) const;

private:
    Dendrogram tree_;
    std::vector<BetaParams> params_;
};

/// Draws a graph with each pair present independently with the probability of
/// its lowest common ancestor. Pairs are visited in a fixed order.
GraphSnapshot sample_graph(const Dendrogram& tree, std::span<const double> probs, Rng& rng, TimeStep time = 0);
/// Posterior-mean plug-in sampling.
GraphSnapshot sample_graph(const GhrgModel& model, Rng& rng, TimeStep time = 0);

/// The counts of the graph sample_graph would draw from the same RNG state,
/// without materializing edges.
PairCounts sample_counts(const Dendrogram& tree, std::span<const double> probs, Rng& rng);

} // namespace netcp
