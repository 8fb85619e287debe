#pragma once

#include "netcp/dendrogram.hpp"
#include "netcp/ghrg.hpp"
#include "netcp/graph.hpp"
#include "netcp/leaf_set.hpp"
#include "netcp/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace netcp {

/// MCMC schedule. One sweep is n proposals for an n-vertex window.
struct FitConfig {
    std::size_t burn_in_sweeps = 200;
    std::size_t n_samples = 100;
    std::size_t sample_interval_sweeps = 5;
    std::uint64_t seed = 0;
    /// Independent chains; each records n_samples samples.
    std::size_t chains = 1;
    /// Burn-in is annealed: the inverse temperature rises geometrically from
    /// anneal_start to 1 over the first anneal_fraction of the burn-in sweeps.
    /// Samples are always drawn at inverse temperature 1.
    double anneal_start = 0.1;
    double anneal_fraction = 0.9;

    void validate() const;
};

/// Full binary dendrogram over n >= 2 leaves with n-1 internal nodes.
/// Children are encoded as Refs: a non-negative value is an internal node
/// index, a negative value ~v is leaf v.
class BinaryDendrogram {
public:
    using Ref = std::int32_t;
    static constexpr Ref kNone = INT32_MIN;

    static constexpr Ref leaf(std::size_t v) noexcept { return ~static_cast<Ref>(v); }
    static constexpr bool is_leaf(Ref r) noexcept { return r < 0; }
    static constexpr std::size_t leaf_id(Ref r) noexcept { return static_cast<std::size_t>(~r); }

    BinaryDendrogram() = default;
    /// Throws InvalidArgument unless the child pairs form one binary tree over n leaves.
    BinaryDendrogram(std::size_t n, std::vector<std::array<Ref, 2>> children);

    std::size_t leaf_count() const noexcept { return n_; }
    std::size_t internal_count() const noexcept { return children_.size(); }
    Ref root() const noexcept { return root_; }
    const std::array<Ref, 2>& children(Ref node) const { return children_[static_cast<std::size_t>(node)]; }
    Ref parent(Ref node) const { return is_leaf(node) ? leaf_parent_[leaf_id(node)] : parent_[static_cast<std::size_t>(node)]; }
    Ref sibling(Ref node) const;

    /// Nearest-neighbor interchange around the edge above `node` (internal,
    /// not the root): the sibling of `node` trades places with child `which`.
    void interchange(Ref node, int which);

    /// Leaf sets of all internal nodes except the root, sorted canonically.
    std::vector<LeafSet> clades() const;
    Dendrogram to_dendrogram() const;

    friend bool operator==(const BinaryDendrogram&, const BinaryDendrogram&) = default;

private:
    void set_parent(Ref child, Ref parent);

    std::size_t n_ = 0;
    Ref root_ = kNone;
    std::vector<std::array<Ref, 2>> children_;
    std::vector<Ref> parent_;
    std::vector<Ref> leaf_parent_;
};

/// Uniformly random labeled rooted binary topology, built by inserting leaves
/// 2..n-1 one at a time on a uniformly chosen edge (including above the root).
BinaryDendrogram random_binary_tree(std::size_t n, Rng& rng);

/// Score used by the sampler: the marginal likelihood of the whole window
/// under one shared p_r per node, i.e. log_marginal with counts sum_t E_r(t)
/// and w * N_r.
double window_score(const Dendrogram& tree, const GraphWindow& window, BetaParams prior);

/// Metropolis-Hastings chain over binary dendrograms targeting exp(window_score).
/// Proposals pick a uniform non-root internal node and one of its two
/// interchanges; only the two affected nodes are rescored.
class TreeChain {
public:
    TreeChain(BinaryDendrogram start, const GraphWindow& window, BetaParams prior);

    /// One proposal; returns whether it was accepted.
    bool step(Rng& rng);
    void sweep(Rng& rng);

    const BinaryDendrogram& tree() const noexcept { return tree_; }
    double log_score() const noexcept { return score_; }
    std::vector<LeafSet> clades() const;
    std::size_t accepted() const noexcept { return accepted_; }
    /// Scales score differences in the acceptance test; 1 targets exp(window_score).
    void set_inverse_temperature(double beta) noexcept { inverse_temperature_ = beta; }
    double inverse_temperature() const noexcept { return inverse_temperature_; }
    std::size_t proposed() const noexcept { return proposed_; }

private:
    const LeafSet& set_of(BinaryDendrogram::Ref r) const;
    std::int64_t size_of(BinaryDendrogram::Ref r) const;
    std::int64_t cross_edges(BinaryDendrogram::Ref a, BinaryDendrogram::Ref b) const;
    double node_term(std::int64_t edges, std::int64_t pairs) const;
    void rebuild();

    BinaryDendrogram tree_;
    BetaParams prior_;
    std::size_t n_ = 0;
    std::size_t w_ = 0;
    std::vector<LeafSet> adjacency_; ///< [t * n + u]
    std::vector<LeafSet> singletons_;
    std::vector<LeafSet> sets_;         ///< per internal node
    std::vector<std::int64_t> edges_;   ///< window total per internal node
    std::vector<std::int64_t> sizes_;   ///< leaves under each internal node
    double log_beta_prior_ = 0.0;
    double score_ = 0.0;
    double inverse_temperature_ = 1.0;
    std::size_t accepted_ = 0;
    std::size_t proposed_ = 0;
};

/// One proposal from `state`, returning the resulting tree.
BinaryDendrogram mcmc_step(const BinaryDendrogram& state, const GraphWindow& window, BetaParams prior, Rng& rng);

/// Clades (non-root internal leaf sets) of one sampled binary tree.
struct BipartitionSample {
    std::size_t leaves = 0;
    std::vector<LeafSet> clades;

    friend bool operator==(const BipartitionSample&, const BipartitionSample&) = default;
};

/// Annealed burn-in, then n_samples samples spaced sample_interval_sweeps apart, per
/// chain; chains are concatenated in chain order. Chain c seeds its RNG with
/// derive_seed(cfg.seed, {c}), so results do not depend on `workers`.
std::vector<BipartitionSample> sample_posterior(const GraphWindow& window, BetaParams prior, const FitConfig& cfg,
                                                unsigned workers = 1);

/// Majority-rule consensus: the tree holding exactly the clades found in more
/// than half of the samples. Throws InvalidArgument on empty input or mixed
/// leaf sets.
Dendrogram consensus_tree(std::span<const BipartitionSample> samples);

/// Consensus tree of the sampled posterior with per-node hyperparameters
/// updated on the whole window.
GhrgModel fit_ghrg(const GraphWindow& window, BetaParams prior, const FitConfig& cfg, unsigned workers = 1);

} // namespace netcp
