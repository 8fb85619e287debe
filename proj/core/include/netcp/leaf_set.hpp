#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace netcp {

/// Fixed-universe bitset over vertex ids 0..n-1. Used for clades (the leaf set
/// under a dendrogram node) and for adjacency rows. Two sets compare equal only
/// if they share the same universe size.
class LeafSet {
public:
    LeafSet() = default;
    explicit LeafSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static LeafSet singleton(std::size_t universe, std::size_t v) {
        LeafSet s(universe);
        s.insert(v);
        return s;
    }
    static LeafSet full(std::size_t universe);

    std::size_t universe() const noexcept { return universe_; }

    void insert(std::size_t v) noexcept { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
    void erase(std::size_t v) noexcept { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
    bool contains(std::size_t v) const noexcept { return (words_[v >> 6] >> (v & 63)) & 1U; }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }
    bool empty() const noexcept;

    /// |this ∩ other| without materializing the intersection.
    std::size_t intersection_count(const LeafSet& other) const noexcept {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        }
        return c;
    }
    bool intersects(const LeafSet& other) const noexcept;
    bool is_subset_of(const LeafSet& other) const noexcept;

    LeafSet& operator|=(const LeafSet& other) noexcept;
    friend LeafSet operator|(LeafSet a, const LeafSet& b) noexcept { return a |= b; }

    /// Smallest member, or universe() when empty.
    std::size_t first() const noexcept;

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w != 0) {
                f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> members() const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const LeafSet&, const LeafSet&) = default;
    /// Canonical order: by universe, then lexicographic on the packed words.
    friend std::strong_ordering operator<=>(const LeafSet& a, const LeafSet& b) noexcept {
        if (auto c = a.universe_ <=> b.universe_; c != 0) {
            return c;
        }
        return a.words_ <=> b.words_;
    }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct LeafSetHash {
    std::size_t operator()(const LeafSet& s) const noexcept;
};

} // namespace netcp
