#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "anhomlog/core.hpp"

namespace anhomlog {

using Bits = boost::dynamic_bitset<>;

/// A finite set of labeled histories. Immutable; shared between events.
class HistorySpace {
public:
    explicit HistorySpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
        detail::require(!labels_.empty(), "history space needs at least one label");
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            detail::require(!labels_[i].empty(), "history label must be nonempty");
            auto [it, inserted] = index_.emplace(labels_[i], i);
            detail::require(inserted, "duplicate history label: " + labels_[i]);
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::optional<std::size_t> index_of(std::string_view label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const HistorySpace& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

using SpacePtr = std::shared_ptr<const HistorySpace>;

inline SpacePtr make_space(std::vector<std::string> labels) {
    return std::make_shared<const HistorySpace>(std::move(labels));
}

namespace detail {

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
    if (!same_space(a, b)) {
        throw SpaceMismatchError("operands belong to different history spaces");
    }
}

}  // namespace detail

/// A subset of a history space, with bit-vector semantics.
class Event {
public:
    Event(SpacePtr space, Bits members) : space_(std::move(space)), bits_(std::move(members)) {
        detail::require(space_ != nullptr, "event needs a space");
        detail::require(bits_.size() == space_->size(), "event bit width must match space size");
    }

    static Event empty(SpacePtr space) {
        Bits b(space->size());
        return Event(std::move(space), std::move(b));
    }

    static Event full(SpacePtr space) {
        Bits b(space->size());
        b.set();
        return Event(std::move(space), std::move(b));
    }

    static Event singleton(SpacePtr space, std::size_t index) {
        detail::require(index < space->size(), "history index out of range");
        Bits b(space->size());
        b.set(index);
        return Event(std::move(space), std::move(b));
    }

    static Event of_indices(SpacePtr space, const std::vector<std::size_t>& indices) {
        Bits b(space->size());
        for (std::size_t i : indices) {
            detail::require(i < space->size(), "history index out of range");
            b.set(i);
        }
        return Event(std::move(space), std::move(b));
    }

    static Event of_labels(SpacePtr space, const std::vector<std::string>& labels) {
        Bits b(space->size());
        for (const auto& label : labels) {
            auto idx = space->index_of(label);
            detail::require(idx.has_value(), "unknown history label: " + label);
            b.set(*idx);
        }
        return Event(std::move(space), std::move(b));
    }

    /// Bit i of `mask` selects history i. Only for spaces with at most 63 histories.
    static Event from_mask(SpacePtr space, std::uint64_t mask) {
        detail::require(space->size() <= 63, "mask construction limited to 63 histories");
        detail::require(mask >> space->size() == 0, "mask has bits outside the space");
        Bits b(space->size());
        for (std::size_t i = 0; i < space->size(); ++i) {
            if (mask >> i & 1) b.set(i);
        }
        return Event(std::move(space), std::move(b));
    }

    std::uint64_t to_mask() const {
        detail::require(space_->size() <= 63, "mask conversion limited to 63 histories");
        std::uint64_t mask = 0;
        for (std::size_t i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
            mask |= std::uint64_t{1} << i;
        }
        return mask;
    }

    const SpacePtr& space() const { return space_; }
    const Bits& bits() const { return bits_; }
    std::size_t count() const { return bits_.count(); }
    bool is_empty() const { return bits_.none(); }
    bool is_full() const { return bits_.all(); }
    bool contains(std::size_t index) const { return index < bits_.size() && bits_.test(index); }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        out.reserve(bits_.count());
        for (std::size_t i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
            out.push_back(i);
        }
        return out;
    }

    std::vector<std::string> member_labels() const {
        std::vector<std::string> out;
        out.reserve(bits_.count());
        for (std::size_t i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
            out.push_back(space_->label(i));
        }
        return out;
    }

    Event complement() const { return Event(space_, ~bits_); }

    bool is_subset_of(const Event& other) const {
        detail::require_same_space(space_, other.space_);
        return bits_.is_subset_of(other.bits_);
    }

    bool intersects(const Event& other) const {
        detail::require_same_space(space_, other.space_);
        return bits_.intersects(other.bits_);
    }

    friend Event operator&(const Event& a, const Event& b) {
        detail::require_same_space(a.space_, b.space_);
        return Event(a.space_, a.bits_ & b.bits_);
    }

    friend Event operator|(const Event& a, const Event& b) {
        detail::require_same_space(a.space_, b.space_);
        return Event(a.space_, a.bits_ | b.bits_);
    }

    /// Symmetric difference: the Boolean-ring addition.
    friend Event operator^(const Event& a, const Event& b) {
        detail::require_same_space(a.space_, b.space_);
        return Event(a.space_, a.bits_ ^ b.bits_);
    }

    friend bool operator==(const Event& a, const Event& b) {
        return detail::same_space(a.space_, b.space_) && a.bits_ == b.bits_;
    }

    friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }

private:
    SpacePtr space_;
    Bits bits_;
};

/// Canonical order: by cardinality, then lexicographically on the member indices.
/// Fixed so every enumeration output is deterministic and diffable.
inline bool canonical_less(const Event& a, const Event& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    std::size_t i = a.bits().find_first();
    std::size_t j = b.bits().find_first();
    while (i != Bits::npos && j != Bits::npos) {
        if (i != j) return i < j;
        i = a.bits().find_next(i);
        j = b.bits().find_next(j);
    }
    return false;
}

inline void sort_canonically(std::vector<Event>& events) {
    std::sort(events.begin(), events.end(), canonical_less);
}

/// All 2^n events of a space in canonical order. Requires n <= cap.
inline std::vector<Event> enumerate_events(const SpacePtr& space,
                                           std::size_t cap = kDefaultCap) {
    const std::size_t n = space->size();
    detail::require_cap(n, cap, "enumerate_events");
    std::vector<Event> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        out.push_back(Event::from_mask(space, mask));
    }
    sort_canonically(out);
    return out;
}

/// Pairwise-disjoint nonempty blocks covering the whole space.
class Partition {
public:
    Partition(SpacePtr space, std::vector<Event> blocks)
        : space_(std::move(space)), blocks_(std::move(blocks)) {
        detail::require(!blocks_.empty(), "partition needs at least one block");
        Bits seen(space_->size());
        for (const auto& block : blocks_) {
            detail::require_same_space(space_, block.space());
            detail::require(!block.is_empty(), "partition block must be nonempty");
            detail::require(!seen.intersects(block.bits()), "partition blocks must be disjoint");
            seen |= block.bits();
        }
        detail::require(seen.all(), "partition blocks must cover the space");
        std::sort(blocks_.begin(), blocks_.end(), [](const Event& a, const Event& b) {
            return a.bits().find_first() < b.bits().find_first();
        });
        block_of_.assign(space_->size(), 0);
        for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
            for (std::size_t h : blocks_[bi].members()) block_of_[h] = bi;
        }
    }

    static Partition discrete(const SpacePtr& space) {
        std::vector<Event> blocks;
        blocks.reserve(space->size());
        for (std::size_t i = 0; i < space->size(); ++i) {
            blocks.push_back(Event::singleton(space, i));
        }
        return Partition(space, std::move(blocks));
    }

    static Partition trivial(const SpacePtr& space) {
        return Partition(space, {Event::full(space)});
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<Event>& blocks() const { return blocks_; }
    std::size_t block_index_of(std::size_t history) const { return block_of_.at(history); }

    friend bool operator==(const Partition& a, const Partition& b) {
        return detail::same_space(a.space_, b.space_) && a.blocks_ == b.blocks_;
    }

    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

private:
    SpacePtr space_;
    std::vector<Event> blocks_;      // sorted by smallest member
    std::vector<std::size_t> block_of_;
};

/// The subalgebra generated by a partition: all 2^k unions of blocks,
/// in canonical order. Closed under intersection and symmetric difference.
inline std::vector<Event> subalgebra_events(const Partition& p, std::size_t cap = kDefaultCap) {
    const std::size_t k = p.blocks().size();
    detail::require_cap(k, cap, "subalgebra_events");
    std::vector<Event> out;
    out.reserve(std::size_t{1} << k);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Bits b(p.space()->size());
        for (std::size_t bi = 0; bi < k; ++bi) {
            if (mask >> bi & 1) b |= p.blocks()[bi].bits();
        }
        out.emplace_back(p.space(), std::move(b));
    }
    sort_canonically(out);
    return out;
}

/// True iff every block of p is contained in some block of q.
inline bool refines(const Partition& p, const Partition& q) {
    detail::require_same_space(p.space(), q.space());
    for (const auto& block : p.blocks()) {
        const std::size_t qi = q.block_index_of(block.bits().find_first());
        if (!block.is_subset_of(q.blocks()[qi])) return false;
    }
    return true;
}

}  // namespace anhomlog
