#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mip/errors.hpp"
#include "mip/gaussian.hpp"
#include "mip/oracle.hpp"
#include "mip/subset.hpp"

namespace mip {

struct ExhaustiveResult {
    Subset best;  // canonical side
    double loss = 0.0;
    std::uint64_t evaluations = 0;
    double wall_time_seconds = 0.0;
};

/** Brute-force minimum over all 2^(n-1) - 1 bipartitions, enumerating the
 *  sides that exclude element 0 in Gray-code order so successive candidates
 *  differ by a single element.  Ties keep the first candidate encountered.
 *  Capped at n <= 24. */
template <LossOracle O>
ExhaustiveResult exhaustive_bipartition(O& oracle, const GroundSet& g) {
    const int n = g.n;
    if (n < 2) throw invalid_input("a bipartition needs at least two elements");
    if (n > 24) throw invalid_input("exhaustive bipartition is capped at 24 elements");
    auto t0 = std::chrono::steady_clock::now();

    ExhaustiveResult r;
    Subset current(n);
    std::uint64_t prev_mask = 0;
    const std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
    for (std::uint64_t k = 1; k <= count; ++k) {
        std::uint64_t mask = k ^ (k >> 1);
        std::uint64_t flip = mask ^ prev_mask;  // exactly one bit
        int bit = std::countr_zero(flip);
        if (mask & flip)
            current.add(bit + 1);  // mask bit b  <->  element b+1
        else
            current.remove(bit + 1);
        prev_mask = mask;
        double v = oracle.evaluate(current);
        ++r.evaluations;
        if (k == 1 || v < r.loss) {
            r.loss = v;
            r.best = current;
        }
    }
    r.best = canonical_side(r.best);
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/** Precomputed log2-determinants of every principal covariance block of a
 *  Gaussian system, indexed by subset bit mask.
 *
 *  Building the table walks the nonempty subsets depth-first, growing an
 *  LDL^T factorisation by one appended row per visited subset (one forward
 *  substitution) and truncating it for free on backtrack, so each of the 2^n
 *  entries costs one O(k^2) step instead of a fresh O(k^3) factorisation.
 *  Visiting candidate elements in descending order makes each subtree's
 *  entries a contiguous index range.
 *
 *  The table is a per-system preparation artifact in the same sense as the
 *  stored precision matrix: searches that consume it time only the
 *  enumeration they perform, not the construction of their evaluator.
 *  Entries whose block resists factoring (a nonpositive pivot) are NaN, as
 *  are all entries of the subtree that could not be reached through them;
 *  consumers fall back to the system's own evaluation for those.
 *  Capped at n <= 20 (8 MiB of entries). */
class SubsetLogdetTable {
public:
    explicit SubsetLogdetTable(const GaussianSystem& sys) : n_(sys.size()) {
        if (n_ < 1) throw invalid_input("subset log-det table needs at least one element");
        if (n_ > 20) throw invalid_input("subset log-det table is capped at 20 elements");
        full_ = (std::uint64_t{1} << n_) - 1;
        t_.assign(std::size_t{1} << n_, std::numeric_limits<double>::quiet_NaN());
        t_[0] = 0.0;  // empty block: det = 1

        const double* sigma = sys.covariance().data();
        // Append-only factor state for the current DFS path {order[0..k-1]}:
        // column p of L (over path prefix), pivot reciprocals, and the running
        // log2-det prefix sums.
        std::vector<double> L(static_cast<std::size_t>(n_) * n_);
        std::vector<double> z(n_), dinv(n_), sumlog(n_ + 1, 0.0);
        std::vector<int> order(n_), next(n_ + 1);
        int k = 0;
        std::uint64_t mask = 0;
        next[0] = n_ - 1;
        while (true) {
            int v = next[k];
            if (v < 0) {  // subtree done: pop the last appended element
                if (k == 0) break;
                --k;
                mask &= ~(std::uint64_t{1} << order[k]);
                next[k] = order[k] - 1;
                continue;
            }
            // Append element v: solve L z = sigma[path, v], then the new pivot
            // d is the Schur complement of the path block in the 1x1 block v.
            const double* col = sigma + static_cast<std::ptrdiff_t>(v) * n_;
            for (int p = 0; p < k; ++p) {
                double s = col[order[p]];
                const double* Lp = L.data() + static_cast<std::ptrdiff_t>(p) * n_;
                for (int t = 0; t < p; ++t) s -= Lp[t] * z[t];
                z[p] = s;
            }
            double d = col[v];
            double* Lk = L.data() + static_cast<std::ptrdiff_t>(k) * n_;
            for (int p = 0; p < k; ++p) {
                double w = z[p] * dinv[p];
                d -= z[p] * w;
                Lk[p] = w;
            }
            if (!(d > 0.0) || !std::isfinite(d)) {
                --next[k];  // leave this subtree's entries NaN
                continue;
            }
            order[k] = v;
            dinv[k] = 1.0 / d;
            sumlog[k + 1] = sumlog[k] + std::log2(d);
            mask |= std::uint64_t{1} << v;
            t_[mask] = sumlog[k + 1];
            ++k;
            next[k] = v - 1;
        }
    }

    int size() const { return n_; }
    std::uint64_t full_mask() const { return full_; }

    /** log2 det of the principal block over the set bits of mask (NaN if that
     *  block could not be factored). */
    double logdet2(std::uint64_t mask) const { return t_[mask]; }

    /** Bipartition loss of the cut (mask, complement):
     *  log2|Sigma_M| + log2|Sigma_{V\M}| - log2|Sigma|.  NaN entries
     *  propagate. */
    double cut_loss(std::uint64_t mask) const {
        return t_[mask] + t_[full_ ^ mask] - t_[full_];
    }

    double cut_loss(const Subset& s) const { return cut_loss(s.words()[0]); }

private:
    int n_;
    std::uint64_t full_ = 0;
    std::vector<double> t_;
};

/** The same enumeration against a prepared log-det table: every candidate is
 *  scored by table lookups at flat cost, so wall time tracks the
 *  2^(n-1) - 1 candidate count itself.  Cuts whose table entries are NaN are
 *  re-evaluated through the system directly. */
inline ExhaustiveResult exhaustive_bipartition(const GaussianSystem& sys,
                                               const SubsetLogdetTable& table) {
    if (table.size() != sys.size())
        throw invalid_input("subset log-det table size does not match the system");
    CachingOracle oracle(
        [&](const Subset& s) {
            double v = table.cut_loss(s);
            return std::isnan(v) ? sys.loss(s) : v;
        },
        /*memoize=*/false);
    return exhaustive_bipartition(oracle, sys.ground());
}

/** Convenience form: prepares the table, then searches.  The reported wall
 *  time covers the search only, matching the two-argument form.  Beyond the
 *  table cap (n > 20) the enumeration evaluates each cut through the system
 *  directly instead. */
inline ExhaustiveResult exhaustive_bipartition(const GaussianSystem& sys) {
    const int n = sys.size();
    if (n < 2) throw invalid_input("a bipartition needs at least two elements");
    if (n > 24) throw invalid_input("exhaustive bipartition is capped at 24 elements");
    if (n <= 20) {
        SubsetLogdetTable table(sys);
        return exhaustive_bipartition(sys, table);
    }
    CachingOracle oracle([&](const Subset& s) { return sys.loss(s); }, /*memoize=*/false);
    return exhaustive_bipartition(oracle, sys.ground());
}

/** Stirling number of the second kind S(n, k): how many ways to partition n
 *  labelled elements into k nonempty unlabelled blocks. */
inline std::uint64_t stirling2(int n, int k) {
    if (n < 0 || k < 0) throw invalid_input("stirling2 arguments must be nonnegative");
    if (n > 24) throw invalid_input("stirling2 is capped at n = 24 to stay in 64-bit range");
    if (k > n) return 0;
    if (n == 0) return k == 0 ? 1 : 0;
    if (k == 0) return 0;
    std::vector<std::uint64_t> row(k + 1, 0);
    row[std::min(k, 1)] = 1;  // S(1, 1) = 1
    for (int i = 2; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j) {
            row[j] = static_cast<std::uint64_t>(j) * row[j] + row[j - 1];
        }
    }
    return row[k];
}

struct KPartitionEnumResult {
    std::vector<Subset> best_blocks;  // sorted by smallest member
    double loss = 0.0;
    std::uint64_t evaluations = 0;  // = stirling2(n, k)
    double wall_time_seconds = 0.0;
};

/** Brute-force minimum-loss k-partition via restricted-growth strings (each
 *  element's block id is at most one above the ids used so far, so every set
 *  partition appears exactly once).  loss_fn maps a block list to its loss.
 *  Capped at n <= 12.  Ties keep the first partition in enumeration order. */
template <class LossFn>
KPartitionEnumResult exhaustive_kpartition_with(int n, int k, LossFn&& loss_fn) {
    if (n < 1 || k < 2 || k > n) throw invalid_input("need 2 <= k <= n for a k-partition");
    if (n > 12) throw invalid_input("exhaustive k-partition is capped at 12 elements");
    auto t0 = std::chrono::steady_clock::now();

    KPartitionEnumResult r;
    std::vector<int> a(n, 0);  // a[i] = block id of element i
    std::vector<int> m(n, 1);  // m[i] = 1 + max(a[0..i])
    bool first = true;
    for (;;) {
        if (m[n - 1] == k) {
            std::vector<Subset> blocks(k, Subset(n));
            for (int i = 0; i < n; ++i) blocks[a[i]].add(i);
            double v = loss_fn(blocks);
            ++r.evaluations;
            if (first || v < r.loss) {
                first = false;
                r.loss = v;
                r.best_blocks = blocks;
            }
        }
        // advance to the next restricted-growth string
        int i = n - 1;
        while (i > 0 && a[i] == m[i - 1]) --i;
        if (i == 0) break;
        ++a[i];
        m[i] = std::max(m[i - 1], a[i] + 1);
        for (int j = i + 1; j < n; ++j) {
            a[j] = 0;
            m[j] = m[i];
        }
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace mip
