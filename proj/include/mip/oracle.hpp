#pragma once

#include <concepts>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include "mip/subset.hpp"

namespace mip {

/** Anything the search engines can query: a real-valued set function with
 *  call accounting.  call_count() counts actual evaluations of the wrapped
 *  function (cache hits are free and tracked separately). */
template <class O>
concept LossOracle = requires(O& o, const Subset& s) {
    { o.evaluate(s) } -> std::convertible_to<double>;
    { o.call_count() } -> std::convertible_to<std::uint64_t>;
};

/** Wraps a set function with optional memoization and call accounting.
 *  Memoization must be transparent: with it on or off the same query
 *  sequence yields bit-identical values, only call_count() differs. */
template <class F>
class CachingOracle {
public:
    explicit CachingOracle(F fn, bool memoize = true)
        : fn_(std::move(fn)), memoize_(memoize) {}

    double evaluate(const Subset& s) {
        if (memoize_) {
            auto it = memo_.find(s);
            if (it != memo_.end()) {
                ++hits_;
                return it->second;
            }
        }
        ++misses_;
        double v = fn_(s);
        if (memoize_) memo_.emplace(s, v);
        return v;
    }

    std::uint64_t call_count() const { return misses_; }
    std::uint64_t hit_count() const { return hits_; }
    bool memoizing() const { return memoize_; }

    void reset_counts() {
        misses_ = 0;
        hits_ = 0;
    }

private:
    F fn_;
    bool memoize_;
    std::uint64_t misses_ = 0;
    std::uint64_t hits_ = 0;
    std::unordered_map<Subset, double, SubsetHash> memo_;
};

template <class F>
CachingOracle(F) -> CachingOracle<F>;

template <class F>
CachingOracle(F, bool) -> CachingOracle<F>;

}  // namespace mip
