#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "mip/subset.hpp"

namespace mip {

/** Contraction state for the pendent-pair search: a partition of the ground
 *  set into effective elements, each a subset of original indices.  Elements
 *  are kept sorted by smallest member, which for disjoint sets coincides
 *  with the lex order used for tie-breaking. */
class MergeState {
public:
    /** One singleton element per ground-set index. */
    explicit MergeState(const GroundSet& g) : n_(g.n) {
        elements_.reserve(g.n);
        for (int i = 0; i < g.n; ++i) elements_.push_back(Subset::of(g.n, {i}));
    }

    /** Start from given blocks.  By default they must partition the ground
     *  set; with require_cover = false they may cover only part of it (used
     *  by searches restricted to a subset of the variables). */
    explicit MergeState(int n, std::vector<Subset> blocks, bool require_cover = true)
        : n_(n), elements_(std::move(blocks)) {
        Subset seen(n);
        for (const Subset& b : elements_) {
            if (b.ground_size() != n) throw invalid_input("merge state block has wrong ground set");
            if (b.empty()) throw invalid_input("merge state block is empty");
            if (seen.intersects(b)) throw invalid_input("merge state blocks overlap");
            seen = seen | b;
        }
        if (require_cover && !seen.is_full())
            throw invalid_input("merge state blocks do not cover the ground set");
        std::sort(elements_.begin(), elements_.end(),
                  [](const Subset& a, const Subset& b) { return a.min_index() < b.min_index(); });
    }

    int ground_size() const { return n_; }

    /** Number of effective elements remaining. */
    int size() const { return static_cast<int>(elements_.size()); }

    /** Original indices inside effective element e. */
    const Subset& flat(int e) const { return elements_.at(e); }

    std::span<const Subset> elements() const { return elements_; }

    struct MergeEvent {
        Subset a, b;  // the two flats that were merged, a.min < b.min
    };

    std::span<const MergeEvent> history() const { return history_; }

    /** Contract elements t and u into one.  The merged element takes the
     *  slot of whichever comes first, so the sort by smallest member is
     *  preserved and later element ids shift down by one. */
    void merge(int t, int u) {
        if (t == u || t < 0 || u < 0 || t >= size() || u >= size())
            throw invalid_input("merge arguments must name two distinct elements");
        int lo = std::min(t, u), hi = std::max(t, u);
        history_.push_back({elements_[lo], elements_[hi]});
        elements_[lo] = elements_[lo] | elements_[hi];
        elements_.erase(elements_.begin() + hi);
    }

private:
    int n_;
    std::vector<Subset> elements_;
    std::vector<MergeEvent> history_;
};

}  // namespace mip
