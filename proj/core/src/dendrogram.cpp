#include "netcp/dendrogram.hpp"

#include "netcp/error.hpp"

#include <algorithm>

namespace netcp {

Dendrogram::Dendrogram(std::size_t n, std::vector<std::vector<NodeId>> children)
    : n_(n), children_(std::move(children)) {
    if (n_ == 0) {
        throw InvalidArgument("a dendrogram needs at least one leaf");
    }
    const std::size_t total = n_ + children_.size();
    if (n_ == 1 && !children_.empty()) {
        throw InvalidArgument("a single-leaf dendrogram has no internal nodes");
    }
    if (n_ > 1 && children_.empty()) {
        throw InvalidArgument("a dendrogram over several leaves needs a root");
    }
    parent_.assign(total, kNoParent);
    for (std::size_t k = 0; k < children_.size(); ++k) {
        if (children_[k].size() < 2) {
            throw InvalidArgument("internal nodes need at least two children");
        }
        for (NodeId c : children_[k]) {
            if (c >= total) {
                throw InvalidArgument("child id out of range");
            }
            if (c == n_ + k || parent_[c] != kNoParent) {
                throw InvalidArgument("node " + std::to_string(c) + " has more than one parent");
            }
            parent_[c] = static_cast<NodeId>(n_ + k);
        }
    }
    root_ = 0;
    std::size_t roots = 0;
    for (std::size_t id = 0; id < total; ++id) {
        if (parent_[id] == kNoParent) {
            root_ = static_cast<NodeId>(id);
            ++roots;
        }
    }
    if (roots != 1) {
        throw InvalidArgument("dendrogram must have exactly one root");
    }
    index();
    if (leaf_order_.size() != n_) {
        throw InvalidArgument("dendrogram contains a cycle or unreachable leaves");
    }
}

void Dendrogram::index() {
    const std::size_t total = n_ + children_.size();
    begin_.assign(total, 0);
    end_.assign(total, 0);
    leaf_order_.clear();
    leaf_order_.reserve(n_);

    // Iterative DFS; `visited` guards against cycles among internal nodes.
    std::vector<char> visited(total, 0);
    std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
    visited[root_] = 1;
    begin_[root_] = 0;
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (is_leaf(node)) {
            begin_[node] = leaf_order_.size();
            leaf_order_.push_back(node);
            end_[node] = leaf_order_.size();
            stack.pop_back();
            continue;
        }
        const auto& kids = children_[ordinal(node)];
        if (next == 0) {
            begin_[node] = leaf_order_.size();
        }
        if (next < kids.size()) {
            const NodeId child = kids[next++];
            if (visited[child]) {
                throw InvalidArgument("dendrogram contains a cycle");
            }
            visited[child] = 1;
            stack.emplace_back(child, 0);
        } else {
            end_[node] = leaf_order_.size();
            stack.pop_back();
        }
    }
    if (std::count(visited.begin(), visited.end(), 1) != static_cast<std::ptrdiff_t>(total)) {
        leaf_order_.clear();
        return;
    }

    pairs_.assign(children_.size(), 0);
    for (std::size_t k = 0; k < children_.size(); ++k) {
        std::int64_t below = 0;
        std::int64_t sum = 0;
        for (NodeId c : children_[k]) {
            const auto s = static_cast<std::int64_t>(size(c));
            sum += below * s;
            below += s;
        }
        pairs_[k] = sum;
    }
}

Dendrogram Dendrogram::star(std::size_t n) {
    if (n == 1) {
        return Dendrogram(1, {});
    }
    std::vector<NodeId> kids(n);
    for (std::size_t v = 0; v < n; ++v) {
        kids[v] = static_cast<NodeId>(v);
    }
    return Dendrogram(n, {std::move(kids)});
}

Dendrogram Dendrogram::from_clades(std::size_t n, std::span<const LeafSet> clades) {
    if (n <= 1) {
        return star(n);
    }
    std::vector<LeafSet> kept;
    for (const auto& c : clades) {
        if (c.universe() != n) {
            throw InvalidArgument("clade universe does not match leaf count");
        }
        const auto k = c.count();
        if (k >= 2 && k < n) {
            kept.push_back(c);
        }
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    std::stable_sort(kept.begin(), kept.end(),
                     [](const LeafSet& a, const LeafSet& b) { return a.count() > b.count(); });

    // Node 0 is the root (full set); node i+1 is kept[i].
    std::vector<const LeafSet*> sets;
    const LeafSet all = LeafSet::full(n);
    sets.push_back(&all);
    std::vector<std::vector<std::size_t>> sub(1);
    for (const auto& c : kept) {
        std::size_t at = 0;
        for (bool descended = true; descended;) {
            descended = false;
            for (std::size_t child : sub[at]) {
                if (c.is_subset_of(*sets[child])) {
                    at = child;
                    descended = true;
                    break;
                }
                if (c.intersects(*sets[child])) {
                    throw InvalidArgument("clades are not laminar");
                }
            }
        }
        sets.push_back(&c);
        sub.emplace_back();
        sub[at].push_back(sets.size() - 1);
    }

    std::vector<std::vector<NodeId>> children(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t child : sub[i]) {
            children[i].push_back(static_cast<NodeId>(n + child));
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t at = 0;
        for (bool descended = true; descended;) {
            descended = false;
            for (std::size_t child : sub[at]) {
                if (sets[child]->contains(v)) {
                    at = child;
                    descended = true;
                    break;
                }
            }
        }
        children[at].push_back(static_cast<NodeId>(v));
    }
    // Deterministic child order: by smallest leaf underneath.
    auto smallest = [&](NodeId id) { return id < n ? std::size_t{id} : sets[id - n]->first(); };
    for (auto& kids : children) {
        std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) { return smallest(a) < smallest(b); });
    }
    return Dendrogram(n, std::move(children));
}

LeafSet Dendrogram::clade(NodeId id) const {
    LeafSet s(n_);
    for (NodeId v : leaves(id)) {
        s.insert(v);
    }
    return s;
}

std::vector<LeafSet> Dendrogram::nontrivial_clades() const {
    std::vector<LeafSet> out;
    for (std::size_t k = 0; k < children_.size(); ++k) {
        const NodeId id = internal_id(k);
        if (id != root_) {
            out.push_back(clade(id));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> Dendrogram::lca_table() const {
    std::vector<std::uint32_t> table(n_ * n_, UINT32_MAX);
    for (std::size_t k = 0; k < children_.size(); ++k) {
        const auto& kids = children_[k];
        for (std::size_t i = 0; i < kids.size(); ++i) {
            for (std::size_t j = i + 1; j < kids.size(); ++j) {
                for (NodeId u : leaves(kids[i])) {
                    for (NodeId v : leaves(kids[j])) {
                        table[u * n_ + v] = static_cast<std::uint32_t>(k);
                        table[v * n_ + u] = static_cast<std::uint32_t>(k);
                    }
                }
            }
        }
    }
    return table;
}

} // namespace netcp
