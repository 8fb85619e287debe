#include "netcp/leaf_set.hpp"

#include "netcp/random.hpp"

namespace netcp {

LeafSet LeafSet::full(std::size_t universe) {
    LeafSet s(universe);
    for (std::size_t v = 0; v < universe; ++v) {
        s.insert(v);
    }
    return s;
}

bool LeafSet::empty() const noexcept {
    for (auto w : words_) {
        if (w != 0) {
            return false;
        }
    }
    return true;
}

bool LeafSet::intersects(const LeafSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if ((words_[i] & other.words_[i]) != 0) {
            return true;
        }
    }
    return false;
}

bool LeafSet::is_subset_of(const LeafSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if ((words_[i] & ~other.words_[i]) != 0) {
            return false;
        }
    }
    return true;
}

LeafSet& LeafSet::operator|=(const LeafSet& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] |= other.words_[i];
    }
    return *this;
}

std::size_t LeafSet::first() const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] != 0) {
            return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
        }
    }
    return universe_;
}

std::vector<std::size_t> LeafSet::members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t v) { out.push_back(v); });
    return out;
}

std::size_t LeafSetHash::operator()(const LeafSet& s) const noexcept {
    std::uint64_t h = mix64(s.universe());
    for (auto w : s.words()) {
        h = mix64(h ^ w);
    }
    return static_cast<std::size_t>(h);
}

} // namespace netcp
