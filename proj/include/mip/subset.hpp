#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mip/errors.hpp"

namespace mip {

/** The set of variables a system is defined over: indices 0..n-1 plus
 *  optional display labels (used by the CLI for 1-based reporting). */
struct GroundSet {
    int n = 0;
    std::vector<std::string> labels;  // empty, or exactly n entries

    explicit GroundSet(int n_, std::vector<std::string> labels_ = {})
        : n(n_), labels(std::move(labels_)) {
        if (n < 1) throw invalid_input("ground set must have at least one element");
        if (!labels.empty() && static_cast<int>(labels.size()) != n)
            throw invalid_input("label count does not match ground set size");
    }

    /** Display label for element i (0-based); defaults to the 1-based index. */
    std::string label(int i) const {
        return labels.empty() ? std::to_string(i + 1) : labels[i];
    }
};

/** A subset of {0,...,n-1}, stored as a dense bit vector in 64-bit words.
 *  Subsets carry their ground-set size n so complements are well defined;
 *  mixing subsets of different ground sets is an error. */
class Subset {
public:
    Subset() = default;

    /** Empty subset of a ground set with n elements. */
    explicit Subset(int n) : n_(n), w_((n + 63) / 64, 0) {
        if (n < 0) throw invalid_input("subset ground size must be nonnegative");
    }

    /** Subset of {0..n-1} containing the given indices. */
    static Subset of(int n, std::initializer_list<int> indices) {
        return of(n, std::span<const int>(indices.begin(), indices.size()));
    }

    static Subset of(int n, std::span<const int> indices) {
        Subset s(n);
        for (int i : indices) s.add(i);
        return s;
    }

    /** The full set {0..n-1}. */
    static Subset full(int n) {
        Subset s(n);
        for (std::size_t k = 0; k < s.w_.size(); ++k) s.w_[k] = ~std::uint64_t{0};
        s.mask_tail();
        return s;
    }

    /** Contiguous range {first..last} (inclusive). */
    static Subset range(int n, int first, int last) {
        Subset s(n);
        for (int i = first; i <= last; ++i) s.add(i);
        return s;
    }

    int ground_size() const { return n_; }

    int count() const {
        int c = 0;
        for (std::uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    bool empty() const {
        for (std::uint64_t w : w_)
            if (w) return false;
        return true;
    }

    bool is_full() const { return count() == n_; }

    bool contains(int i) const {
        check_index(i);
        return (w_[i >> 6] >> (i & 63)) & 1u;
    }

    Subset& add(int i) {
        check_index(i);
        w_[i >> 6] |= std::uint64_t{1} << (i & 63);
        return *this;
    }

    Subset& remove(int i) {
        check_index(i);
        w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        return *this;
    }

    /** Complement with respect to the ground set. */
    Subset complement() const {
        Subset s(n_);
        for (std::size_t k = 0; k < w_.size(); ++k) s.w_[k] = ~w_[k];
        s.mask_tail();
        return s;
    }

    Subset operator|(const Subset& o) const {
        Subset s = combined_shell(o);
        for (std::size_t k = 0; k < w_.size(); ++k) s.w_[k] = w_[k] | o.w_[k];
        return s;
    }

    Subset operator&(const Subset& o) const {
        Subset s = combined_shell(o);
        for (std::size_t k = 0; k < w_.size(); ++k) s.w_[k] = w_[k] & o.w_[k];
        return s;
    }

    /** Set difference: elements of *this not in o. */
    Subset difference(const Subset& o) const {
        Subset s = combined_shell(o);
        for (std::size_t k = 0; k < w_.size(); ++k) s.w_[k] = w_[k] & ~o.w_[k];
        return s;
    }

    bool intersects(const Subset& o) const {
        check_same_ground(o);
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & o.w_[k]) return true;
        return false;
    }

    bool is_subset_of(const Subset& o) const {
        check_same_ground(o);
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }

    bool operator==(const Subset& o) const = default;

    /** Smallest member, or -1 if empty. */
    int min_index() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return static_cast<int>(k * 64 + std::countr_zero(w_[k]));
        return -1;
    }

    /** Members in increasing order. */
    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    template <class F>
    void for_each(F&& fn) const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            std::uint64_t w = w_[k];
            while (w) {
                int b = std::countr_zero(w);
                fn(static_cast<int>(k * 64 + b));
                w &= w - 1;
            }
        }
    }

    /** "{0,3,5}" (0-based, ascending). */
    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for_each([&](int i) {
            if (!first) out += ',';
            out += std::to_string(i);
            first = false;
        });
        out += '}';
        return out;
    }

    std::span<const std::uint64_t> words() const { return w_; }

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;

    void mask_tail() {
        int tail = n_ & 63;
        if (tail && !w_.empty()) w_.back() &= (std::uint64_t{1} << tail) - 1;
    }

    void check_index(int i) const {
        if (i < 0 || i >= n_) throw invalid_input("subset index out of range");
    }

    void check_same_ground(const Subset& o) const {
        if (n_ != o.n_) throw invalid_input("subsets have different ground sets");
    }

    Subset combined_shell(const Subset& o) const {
        check_same_ground(o);
        return Subset(n_);
    }
};

struct SubsetHash {
    std::size_t operator()(const Subset& s) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(s.ground_size());
        for (std::uint64_t w : s.words()) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

/** Order used for all tie-breaks: compare the sorted index sequences
 *  lexicographically.  {0,5} < {1,2}; {1} < {1,2}. */
inline bool lex_less(const Subset& a, const Subset& b) {
    auto wa = a.words(), wb = b.words();
    std::size_t nw = std::max(wa.size(), wb.size());
    for (std::size_t k = 0; k < nw; ++k) {
        std::uint64_t x = k < wa.size() ? wa[k] : 0;
        std::uint64_t y = k < wb.size() ? wb[k] : 0;
        if (x == y) continue;
        // Lowest differing index decides: if it belongs to a, then a has the
        // smaller leading element, so a < b unless a already ran out later...
        std::uint64_t diff = x ^ y;
        int b0 = std::countr_zero(diff);
        bool in_a = (x >> b0) & 1u;
        // The prefixes up to this index are equal.  If the differing index is
        // in a, then a's next element is smaller; a < b iff b still has some
        // element beyond this point (otherwise b is a strict prefix of a).
        int d = static_cast<int>(k * 64 + b0);
        const Subset& longer = in_a ? b : a;
        bool longer_has_more = false;
        auto wl = longer.words();
        for (std::size_t j = k; j < wl.size() && !longer_has_more; ++j) {
            std::uint64_t w = wl[j];
            if (j == static_cast<std::size_t>(k)) w &= ~((std::uint64_t{1} << (d & 63)) - 1);
            if (w) longer_has_more = true;
        }
        return in_a ? longer_has_more : !longer_has_more;
    }
    return false;  // equal
}

/** The canonical reporting side of a bipartition {s, complement(s)}: the
 *  smaller side, with lex_less breaking exact ties in size. */
inline Subset canonical_side(const Subset& s) {
    Subset c = s.complement();
    int a = s.count(), b = c.count();
    if (a != b) return a < b ? s : c;
    return lex_less(s, c) ? s : c;
}

}  // namespace mip
