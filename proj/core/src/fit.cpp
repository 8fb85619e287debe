#include "netcp/fit.hpp"

#include "netcp/error.hpp"
#include "netcp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace netcp {

void FitConfig::validate() const {
    if (n_samples == 0 || sample_interval_sweeps == 0 || chains == 0) {
        throw InvalidArgument("samples, sample interval and chain count must be positive");
    }
    if (!(anneal_start > 0.0 && anneal_start <= 1.0)) {
        throw InvalidArgument("anneal start must lie in (0, 1]");
    }
    if (!(anneal_fraction >= 0.0 && anneal_fraction <= 1.0)) {
        throw InvalidArgument("anneal fraction must lie in [0, 1]");
    }
}

// ---------------------------------------------------------------------------
// BinaryDendrogram

BinaryDendrogram::BinaryDendrogram(std::size_t n, std::vector<std::array<Ref, 2>> children)
    : n_(n), children_(std::move(children)) {
    if (n_ < 2 || children_.size() != n_ - 1) {
        throw InvalidArgument("a binary dendrogram over n >= 2 leaves has n - 1 internal nodes");
    }
    parent_.assign(children_.size(), kNone);
    leaf_parent_.assign(n_, kNone);
    for (std::size_t k = 0; k < children_.size(); ++k) {
        for (Ref c : children_[k]) {
            const bool bad = is_leaf(c) ? leaf_id(c) >= n_ : static_cast<std::size_t>(c) >= children_.size() ||
                                                                 static_cast<std::size_t>(c) == k;
            if (bad || parent(c) != kNone) {
                throw InvalidArgument("invalid or repeated child in binary dendrogram");
            }
            set_parent(c, static_cast<Ref>(k));
        }
    }
    for (std::size_t v = 0; v < n_; ++v) {
        if (leaf_parent_[v] == kNone) {
            throw InvalidArgument("leaf " + std::to_string(v) + " is not attached");
        }
    }
    std::size_t roots = 0;
    for (std::size_t k = 0; k < parent_.size(); ++k) {
        if (parent_[k] == kNone) {
            root_ = static_cast<Ref>(k);
            ++roots;
        }
    }
    if (roots != 1) {
        throw InvalidArgument("binary dendrogram must have exactly one root");
    }
    // With n-1 internal nodes, one root and every other node having one parent,
    // the structure is a tree iff every node reaches the root.
    for (std::size_t k = 0; k < parent_.size(); ++k) {
        Ref at = static_cast<Ref>(k);
        for (std::size_t hops = 0; at != root_; ++hops) {
            if (hops > parent_.size()) {
                throw InvalidArgument("binary dendrogram contains a cycle");
            }
            at = parent_[static_cast<std::size_t>(at)];
        }
    }
}

void BinaryDendrogram::set_parent(Ref child, Ref parent) {
    if (is_leaf(child)) {
        leaf_parent_[leaf_id(child)] = parent;
    } else {
        parent_[static_cast<std::size_t>(child)] = parent;
    }
}

BinaryDendrogram::Ref BinaryDendrogram::sibling(Ref node) const {
    const Ref p = parent(node);
    if (p == kNone) {
        return kNone;
    }
    const auto& pc = children(p);
    return pc[0] == node ? pc[1] : pc[0];
}

void BinaryDendrogram::interchange(Ref node, int which) {
    const Ref p = parent(node);
    if (is_leaf(node) || p == kNone || (which != 0 && which != 1)) {
        throw InvalidArgument("interchange needs a non-root internal node and a child slot");
    }
    auto& pc = children_[static_cast<std::size_t>(p)];
    auto& xc = children_[static_cast<std::size_t>(node)];
    const int sib_slot = pc[0] == node ? 1 : 0;
    const Ref c = pc[sib_slot];
    const Ref a = xc[which];
    xc[which] = c;
    pc[sib_slot] = a;
    set_parent(c, node);
    set_parent(a, p);
}

std::vector<LeafSet> BinaryDendrogram::clades() const {
    // Post-order accumulation of leaf sets.
    std::vector<LeafSet> sets(children_.size(), LeafSet(n_));
    std::vector<std::pair<Ref, bool>> stack{{root_, false}};
    while (!stack.empty()) {
        auto [node, expanded] = stack.back();
        stack.pop_back();
        if (!expanded) {
            stack.emplace_back(node, true);
            for (Ref c : children(node)) {
                if (!is_leaf(c)) {
                    stack.emplace_back(c, false);
                }
            }
            continue;
        }
        auto& s = sets[static_cast<std::size_t>(node)];
        for (Ref c : children(node)) {
            if (is_leaf(c)) {
                s.insert(leaf_id(c));
            } else {
                s |= sets[static_cast<std::size_t>(c)];
            }
        }
    }
    std::vector<LeafSet> out;
    out.reserve(sets.size() - 1);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        if (static_cast<Ref>(k) != root_) {
            out.push_back(std::move(sets[k]));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Dendrogram BinaryDendrogram::to_dendrogram() const {
    const auto cl = clades();
    return Dendrogram::from_clades(n_, cl);
}

BinaryDendrogram random_binary_tree(std::size_t n, Rng& rng) {
    using Ref = BinaryDendrogram::Ref;
    if (n < 2) {
        throw InvalidArgument("a binary dendrogram needs at least 2 leaves");
    }
    std::vector<std::array<Ref, 2>> children{{BinaryDendrogram::leaf(0), BinaryDendrogram::leaf(1)}};
    std::vector<Ref> parent{BinaryDendrogram::kNone};
    std::vector<Ref> leaf_parent{0, 0};
    Ref root = 0;

    for (std::size_t k = 2; k < n; ++k) {
        // 2k - 1 insertion points: the edge above each of the k leaves and
        // k - 1 internal nodes (the root's "edge" inserts a new root).
        const auto pick = uniform_index(rng, 2 * k - 1);
        const Ref target = pick < k ? BinaryDendrogram::leaf(pick) : static_cast<Ref>(pick - k);
        const Ref joint = static_cast<Ref>(children.size());
        const Ref up = BinaryDendrogram::is_leaf(target) ? leaf_parent[BinaryDendrogram::leaf_id(target)]
                                                         : parent[static_cast<std::size_t>(target)];
        children.push_back({target, BinaryDendrogram::leaf(k)});
        parent.push_back(up);
        leaf_parent.push_back(joint);
        if (BinaryDendrogram::is_leaf(target)) {
            leaf_parent[BinaryDendrogram::leaf_id(target)] = joint;
        } else {
            parent[static_cast<std::size_t>(target)] = joint;
        }
        if (up == BinaryDendrogram::kNone) {
            root = joint;
        } else {
            auto& uc = children[static_cast<std::size_t>(up)];
            (uc[0] == target ? uc[0] : uc[1]) = joint;
        }
    }
    (void)root;
    return BinaryDendrogram(n, std::move(children));
}

double window_score(const Dendrogram& tree, const GraphWindow& window, BetaParams prior) {
    PairCounter counter(tree);
    PairCounts total{std::vector<std::int64_t>(tree.internal_count(), 0),
                     std::vector<std::int64_t>(tree.internal_count(), 0)};
    for (const auto& g : window.snapshots()) {
        const auto c = counter.count(g);
        for (std::size_t k = 0; k < c.size(); ++k) {
            total.edges[k] += c.edges[k];
            total.pairs[k] += c.pairs[k];
        }
    }
    return log_marginal(total, prior);
}

// ---------------------------------------------------------------------------
// TreeChain

TreeChain::TreeChain(BinaryDendrogram start, const GraphWindow& window, BetaParams prior)
    : tree_(std::move(start)), prior_(prior), n_(window.vertex_count()), w_(window.length()) {
    if (tree_.leaf_count() != n_) {
        throw InvalidArgument("tree leaves do not match window vertices");
    }
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) {
        throw InvalidArgument("Beta hyperparameters must be positive");
    }
    adjacency_.assign(w_ * n_, LeafSet(n_));
    for (std::size_t t = 0; t < w_; ++t) {
        for (const auto& e : window[t].edges()) {
            adjacency_[t * n_ + e.u].insert(e.v);
            adjacency_[t * n_ + e.v].insert(e.u);
        }
    }
    singletons_.reserve(n_);
    for (std::size_t v = 0; v < n_; ++v) {
        singletons_.push_back(LeafSet::singleton(n_, v));
    }
    log_beta_prior_ = std::lgamma(prior_.alpha) + std::lgamma(prior_.beta) - std::lgamma(prior_.alpha + prior_.beta);
    rebuild();
}

const LeafSet& TreeChain::set_of(BinaryDendrogram::Ref r) const {
    return BinaryDendrogram::is_leaf(r) ? singletons_[BinaryDendrogram::leaf_id(r)]
                                        : sets_[static_cast<std::size_t>(r)];
}

std::int64_t TreeChain::size_of(BinaryDendrogram::Ref r) const {
    return BinaryDendrogram::is_leaf(r) ? 1 : sizes_[static_cast<std::size_t>(r)];
}

std::int64_t TreeChain::cross_edges(BinaryDendrogram::Ref a, BinaryDendrogram::Ref b) const {
    if (size_of(a) > size_of(b)) {
        std::swap(a, b);
    }
    const LeafSet& target = set_of(b);
    std::int64_t total = 0;
    set_of(a).for_each([&](std::size_t u) {
        for (std::size_t t = 0; t < w_; ++t) {
            total += static_cast<std::int64_t>(adjacency_[t * n_ + u].intersection_count(target));
        }
    });
    return total;
}

double TreeChain::node_term(std::int64_t edges, std::int64_t pairs) const {
    const double trials = static_cast<double>(pairs) * static_cast<double>(w_);
    const auto e = static_cast<double>(edges);
    return std::lgamma(e + prior_.alpha) + std::lgamma(trials - e + prior_.beta) -
           std::lgamma(trials + prior_.alpha + prior_.beta) - log_beta_prior_;
}

void TreeChain::rebuild() {
    const std::size_t m = tree_.internal_count();
    sets_.assign(m, LeafSet(n_));
    sizes_.assign(m, 0);
    edges_.assign(m, 0);
    std::vector<std::pair<BinaryDendrogram::Ref, bool>> stack{{tree_.root(), false}};
    while (!stack.empty()) {
        auto [node, expanded] = stack.back();
        stack.pop_back();
        const auto& kids = tree_.children(node);
        if (!expanded) {
            stack.emplace_back(node, true);
            for (auto c : kids) {
                if (!BinaryDendrogram::is_leaf(c)) {
                    stack.emplace_back(c, false);
                }
            }
            continue;
        }
        const auto k = static_cast<std::size_t>(node);
        sets_[k] = set_of(kids[0]) | set_of(kids[1]);
        sizes_[k] = size_of(kids[0]) + size_of(kids[1]);
        edges_[k] = cross_edges(kids[0], kids[1]);
    }
    score_ = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto& kids = tree_.children(static_cast<BinaryDendrogram::Ref>(k));
        score_ += node_term(edges_[k], size_of(kids[0]) * size_of(kids[1]));
    }
}

bool TreeChain::step(Rng& rng) {
    using Ref = BinaryDendrogram::Ref;
    ++proposed_;
    const std::size_t m = tree_.internal_count();
    if (m < 2) {
        return false; // a single topology
    }
    auto pick = static_cast<Ref>(uniform_index(rng, m - 1));
    const Ref x = pick >= tree_.root() ? pick + 1 : pick;
    const int which = static_cast<int>(uniform_index(rng, 2));
    const double u = uniform01(rng);

    const Ref p = tree_.parent(x);
    const Ref c = tree_.sibling(x);
    const Ref a = tree_.children(x)[which];
    const Ref b = tree_.children(x)[1 - which];
    const auto xi = static_cast<std::size_t>(x);
    const auto pi = static_cast<std::size_t>(p);

    const std::int64_t sa = size_of(a);
    const std::int64_t sb = size_of(b);
    const std::int64_t sc = size_of(c);
    const std::int64_t e_ab = edges_[xi];
    const std::int64_t e_ac = cross_edges(a, c);
    const std::int64_t e_bc = edges_[pi] - e_ac;

    // After the move: x holds {b, c}; p holds {x, a}.
    const double before = node_term(e_ab, sa * sb) + node_term(edges_[pi], (sa + sb) * sc);
    const double after = node_term(e_bc, sb * sc) + node_term(e_ab + e_ac, (sb + sc) * sa);
    const double delta = after - before;
    if (!(delta >= 0.0 || std::log(u) < inverse_temperature_ * delta)) {
        return false;
    }
    tree_.interchange(x, which);
    sets_[xi] = set_of(b) | set_of(c);
    sizes_[xi] = sb + sc;
    edges_[xi] = e_bc;
    edges_[pi] = e_ab + e_ac;
    score_ += delta;
    ++accepted_;
    return true;
}

void TreeChain::sweep(Rng& rng) {
    for (std::size_t i = 0; i < n_; ++i) {
        step(rng);
    }
}

std::vector<LeafSet> TreeChain::clades() const {
    std::vector<LeafSet> out;
    out.reserve(sets_.size());
    for (std::size_t k = 0; k < sets_.size(); ++k) {
        if (static_cast<BinaryDendrogram::Ref>(k) != tree_.root()) {
            out.push_back(sets_[k]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

BinaryDendrogram mcmc_step(const BinaryDendrogram& state, const GraphWindow& window, BetaParams prior, Rng& rng) {
    TreeChain chain(state, window, prior);
    chain.step(rng);
    return chain.tree();
}

// ---------------------------------------------------------------------------
// Posterior sampling and consensus

std::vector<BipartitionSample> sample_posterior(const GraphWindow& window, BetaParams prior, const FitConfig& cfg,
                                                unsigned workers) {
    cfg.validate();
    const std::size_t n = window.vertex_count();
    if (n < 2) {
        return std::vector<BipartitionSample>(cfg.n_samples * cfg.chains, BipartitionSample{n, {}});
    }
    std::vector<std::vector<BipartitionSample>> per_chain(cfg.chains);
    parallel_for(cfg.chains, workers, [&](std::size_t c) {
        Rng rng(derive_seed(cfg.seed, {c}));
        TreeChain chain(random_binary_tree(n, rng), window, prior);
        const auto cooling = static_cast<std::size_t>(cfg.anneal_fraction * static_cast<double>(cfg.burn_in_sweeps));
        for (std::size_t s = 0; s < cfg.burn_in_sweeps; ++s) {
            const double progress = static_cast<double>(s) / static_cast<double>(cooling);
            chain.set_inverse_temperature(s < cooling ? std::pow(cfg.anneal_start, 1.0 - progress) : 1.0);
            chain.sweep(rng);
        }
        chain.set_inverse_temperature(1.0);
        auto& out = per_chain[c];
        out.reserve(cfg.n_samples);
        for (std::size_t i = 0; i < cfg.n_samples; ++i) {
            for (std::size_t s = 0; s < cfg.sample_interval_sweeps; ++s) {
                chain.sweep(rng);
            }
            out.push_back(BipartitionSample{n, chain.clades()});
        }
    });
    std::vector<BipartitionSample> all;
    all.reserve(cfg.n_samples * cfg.chains);
    for (auto& chain : per_chain) {
        std::move(chain.begin(), chain.end(), std::back_inserter(all));
    }
    return all;
}

Dendrogram consensus_tree(std::span<const BipartitionSample> samples) {
    if (samples.empty()) {
        throw InvalidArgument("consensus needs at least one sample");
    }
    const std::size_t n = samples.front().leaves;
    std::map<LeafSet, std::size_t> frequency;
    for (const auto& s : samples) {
        if (s.leaves != n) {
            throw InvalidArgument("samples cover different leaf sets");
        }
        for (const auto& c : s.clades) {
            ++frequency[c];
        }
    }
    std::vector<LeafSet> majority;
    for (const auto& [clade, count] : frequency) {
        if (2 * count > samples.size()) {
            majority.push_back(clade);
        }
    }
    try {
        return Dendrogram::from_clades(n, majority);
    } catch (const InvalidArgument& e) {
        // Strict-majority clades are always pairwise compatible.
        throw std::logic_error(std::string("majority clades incompatible: ") + e.what());
    }
}

GhrgModel fit_ghrg(const GraphWindow& window, BetaParams prior, const FitConfig& cfg, unsigned workers) {
    const std::size_t n = window.vertex_count();
    Dendrogram tree = n < 2 ? Dendrogram::star(n) : consensus_tree(sample_posterior(window, prior, cfg, workers));
    PairCounter counter(tree);
    std::vector<PairCounts> counts;
    counts.reserve(window.length());
    for (const auto& g : window.snapshots()) {
        counts.push_back(counter.count(g));
    }
    auto params = posterior_update(prior, counts, tree.internal_count());
    return GhrgModel(std::move(tree), std::move(params));
}

} // namespace netcp
