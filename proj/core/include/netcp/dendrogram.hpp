#pragma once

#include "netcp/leaf_set.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace netcp {

/// Rooted tree whose leaves are the vertex ids 0..n-1 and whose internal
/// nodes have at least two children. Node ids 0..n-1 are leaves; ids
/// n..n+m-1 are the m internal nodes, where internal node id n+k has
/// ordinal k. Per-node parameters elsewhere in the library are indexed by
/// ordinal. The single-vertex tree has no internal nodes and its root is leaf 0.
class Dendrogram {
public:
    using NodeId = std::uint32_t;
    static constexpr NodeId kNoParent = UINT32_MAX;

    Dendrogram() = default;

    /// `children[k]` lists the children of internal node n+k. Throws
    /// InvalidArgument unless the lists form a single rooted tree covering
    /// every leaf exactly once with every internal node having >= 2 children.
    Dendrogram(std::size_t n, std::vector<std::vector<NodeId>> children);

    /// Root-only tree: every vertex hangs off one internal node.
    static Dendrogram star(std::size_t n);

    /// The unique tree whose non-trivial clades are exactly `clades`
    /// (singletons, duplicates and the full set are ignored). Throws
    /// InvalidArgument if the clades are not pairwise nested or disjoint.
    static Dendrogram from_clades(std::size_t n, std::span<const LeafSet> clades);

    std::size_t leaf_count() const noexcept { return n_; }
    std::size_t internal_count() const noexcept { return children_.size(); }
    NodeId root() const noexcept { return root_; }

    bool is_leaf(NodeId id) const noexcept { return id < n_; }
    std::size_t ordinal(NodeId id) const noexcept { return id - n_; }
    NodeId internal_id(std::size_t ordinal) const noexcept { return static_cast<NodeId>(n_ + ordinal); }

    std::span<const NodeId> children(NodeId id) const { return children_[ordinal(id)]; }
    NodeId parent(NodeId id) const noexcept { return parent_[id]; }
    std::size_t size(NodeId id) const noexcept { return end_[id] - begin_[id]; }
    /// Leaf ids under a node, contiguous in depth-first order.
    std::span<const NodeId> leaves(NodeId id) const {
        return std::span<const NodeId>(leaf_order_).subspan(begin_[id], size(id));
    }
    LeafSet clade(NodeId id) const;

    /// N_r for internal ordinal k: the number of vertex pairs whose lowest
    /// common ancestor is that node.
    std::int64_t possible_pairs(std::size_t ordinal) const noexcept { return pairs_[ordinal]; }

    /// Clades of all non-root internal nodes, sorted canonically.
    std::vector<LeafSet> nontrivial_clades() const;

    /// Row-major n*n table of the internal ordinal of each pair's lowest
    /// common ancestor (diagonal entries are unspecified).
    std::vector<std::uint32_t> lca_table() const;

    friend bool same_topology(const Dendrogram& a, const Dendrogram& b) {
        return a.n_ == b.n_ && a.nontrivial_clades() == b.nontrivial_clades();
    }

private:
    void index();

    std::size_t n_ = 0;
    NodeId root_ = 0;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> leaf_order_;
    std::vector<std::size_t> begin_;
    std::vector<std::size_t> end_;
    std::vector<std::int64_t> pairs_;
};

} // namespace netcp
