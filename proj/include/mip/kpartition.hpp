#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "mip/errors.hpp"
#include "mip/gaussian.hpp"
#include "mip/merge.hpp"
#include "mip/oracle.hpp"
#include "mip/queyranne.hpp"
#include "mip/subset.hpp"

namespace mip {

/** Anything with subset entropies: enough to define every partition loss
 *  used here (all of them are entropy sums minus the total entropy). */
template <class S>
concept EntropySystem = requires(const S& s, const Subset& m) {
    { s.size() } -> std::convertible_to<int>;
    { s.entropy(m) } -> std::convertible_to<double>;
};

/** Total correlation of a partition: sum of block entropies minus the joint
 *  entropy, in bits.  For two blocks this equals the bipartition loss.
 *  The blocks must form a partition of the full ground set. */
template <EntropySystem S>
double total_correlation_loss(const S& sys, std::span<const Subset> blocks) {
    const int n = sys.size();
    if (blocks.empty()) throw invalid_input("a partition needs at least one block");
    Subset seen(n);
    double total = 0.0;
    for (const Subset& b : blocks) {
        if (b.ground_size() != n) throw invalid_input("partition block has wrong ground set");
        if (b.empty()) throw invalid_input("partition block is empty");
        if (seen.intersects(b)) throw invalid_input("partition blocks overlap");
        seen = seen | b;
        total += sys.entropy(b);
    }
    if (!seen.is_full()) throw invalid_input("partition blocks do not cover the ground set");
    return total - sys.entropy(Subset::full(n));
}

struct KPartition {
    std::vector<Subset> blocks;  // sorted by smallest member
    double loss = 0.0;
    std::uint64_t oracle_calls = 0;  // distinct entropy evaluations
    double wall_time_seconds = 0.0;
};

namespace detail {

struct KSolution {
    double loss = 0.0;
    std::vector<Subset> blocks;
};

struct KMemoKey {
    Subset set;
    int parts;
    bool operator==(const KMemoKey&) const = default;
};

struct KMemoKeyHash {
    std::size_t operator()(const KMemoKey& k) const noexcept {
        return SubsetHash{}(k.set) * 1315423911u ^ static_cast<std::size_t>(k.parts);
    }
};

/** Exact minimum-loss j-partition of the subset s, by minimizing over first
 *  cuts U of the symmetric function
 *
 *      G(U) = f_s(U) + min_{a+b=j} [ best(U, a) + best(s-U, b) ]
 *
 *  with f_s(U) = H(U) + H(s-U) - H(s) the loss of cutting U out of s.  G is
 *  minimized with the same pendent-pair contraction as the bipartition
 *  search; sub-solutions and entropies are memoized across the whole call. */
template <class HOracle>
class KPartitionSolver {
public:
    KPartitionSolver(HOracle& h, int n) : h_(h), n_(n) {}

    const KSolution& solve(const Subset& s, int parts) {
        KMemoKey key{s, parts};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        KSolution sol;
        if (parts == 1) {
            sol.blocks = {s};
            sol.loss = 0.0;
            return memo_.emplace(std::move(key), std::move(sol)).first->second;
        }

        const double h_s = h_.evaluate(s);
        auto g = [&](const Subset& u) {
            double f = h_.evaluate(u) + h_.evaluate(s.difference(u)) - h_s;
            return f + best_split(u, s.difference(u), parts);
        };
        CachingOracle g_oracle(g);

        std::vector<Subset> singles;
        s.for_each([&](int i) { singles.push_back(Subset::of(n_, {i})); });
        std::vector<CandidateCut> candidates =
            queyranne_candidates(g_oracle, MergeState(n_, std::move(singles), /*require_cover=*/false));

        int best = 0;
        for (int i = 1; i < static_cast<int>(candidates.size()); ++i)
            if (candidates[i].loss < candidates[best].loss) best = i;

        const Subset& u = candidates[best].side;
        Subset rest = s.difference(u);
        auto [a, b] = split_arg(u, rest, parts);
        sol.loss = candidates[best].loss;
        for (const Subset& blk : solve(u, a).blocks) sol.blocks.push_back(blk);
        for (const Subset& blk : solve(rest, b).blocks) sol.blocks.push_back(blk);
        return memo_.emplace(std::move(key), std::move(sol)).first->second;
    }

private:
    /** min over a+b=parts (a blocks in u, b in rest) of the sub-losses;
     *  +inf when the sizes cannot accommodate the split. */
    double best_split(const Subset& u, const Subset& rest, int parts) {
        double best = std::numeric_limits<double>::infinity();
        const int cu = u.count(), cr = rest.count();
        for (int a = 1; a < parts; ++a) {
            int b = parts - a;
            if (a > cu || b > cr) continue;
            double v = solve(u, a).loss + solve(rest, b).loss;
            if (v < best) best = v;
        }
        return best;
    }

    std::pair<int, int> split_arg(const Subset& u, const Subset& rest, int parts) {
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> arg{-1, -1};
        const int cu = u.count(), cr = rest.count();
        for (int a = 1; a < parts; ++a) {
            int b = parts - a;
            if (a > cu || b > cr) continue;
            double v = solve(u, a).loss + solve(rest, b).loss;
            if (v < best) {
                best = v;
                arg = {a, b};
            }
        }
        if (arg.first < 0) throw numeric_error("no feasible split found for k-partition");
        return arg;
    }

    HOracle& h_;
    int n_;
    std::unordered_map<KMemoKey, KSolution, KMemoKeyHash> memo_;
};

inline void sort_blocks(std::vector<Subset>& blocks) {
    std::sort(blocks.begin(), blocks.end(),
              [](const Subset& a, const Subset& b) { return a.min_index() < b.min_index(); });
}

template <EntropySystem S>
KPartition minimize_kpartition_generic(const S& sys, int k) {
    const int n = sys.size();
    if (k < 2 || k > n) throw invalid_input("need 2 <= k <= n for a k-partition");
    auto t0 = std::chrono::steady_clock::now();

    CachingOracle h([&sys](const Subset& m) { return sys.entropy(m); });
    KPartitionSolver solver(h, n);
    KSolution sol = solver.solve(Subset::full(n), k);
    sort_blocks(sol.blocks);

    KPartition r;
    r.blocks = std::move(sol.blocks);
    r.loss = total_correlation_loss(sys, r.blocks);
    r.oracle_calls = h.call_count();
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

/** Exact minimum total-correlation k-partition (2 <= k <= n). */
template <EntropySystem S>
KPartition minimize_kpartition(const S& sys, int k) {
    return detail::minimize_kpartition_generic(sys, k);
}

/** Gaussian overload: k = 2 is delegated to the incremental bipartition
 *  search; larger k runs the recursive solver. */
inline KPartition minimize_kpartition(const GaussianSystem& sys, int k) {
    const int n = sys.size();
    if (k < 2 || k > n) throw invalid_input("need 2 <= k <= n for a k-partition");
    if (k > 2) return detail::minimize_kpartition_generic(sys, k);

    BipartitionResult b = minimize_bipartition(sys);
    KPartition r;
    r.blocks = {b.best, b.best.complement()};
    detail::sort_blocks(r.blocks);
    r.loss = b.loss;
    r.oracle_calls = b.oracle_calls;
    r.wall_time_seconds = b.wall_time_seconds;
    return r;
}

/** Node of a recursive-bipartition tree.  Built top-down by repeatedly
 *  taking the minimum bipartition inside each block; the split_loss at a
 *  node is the bipartition loss within that block's marginal.  The loss of
 *  the leaf partition is NOT guaranteed minimal among all partitions with
 *  that many blocks — this is a cheap heuristic refinement, not the exact
 *  k-partition search above. */
struct HierarchyNode {
    Subset block;
    double split_loss = 0.0;
    std::vector<HierarchyNode> children;  // empty (leaf) or exactly 2

    bool is_leaf() const { return children.empty(); }

    std::vector<Subset> leaves() const {
        std::vector<Subset> out;
        collect(out);
        detail::sort_blocks(out);
        return out;
    }

    void collect(std::vector<Subset>& out) const {
        if (is_leaf()) {
            out.push_back(block);
            return;
        }
        for (const HierarchyNode& c : children) c.collect(out);
    }
};

namespace detail {

template <class HOracle>
HierarchyNode hierarchical_split(HOracle& h, int n, const Subset& block,
                                 const std::function<bool(const Subset&)>& stop) {
    HierarchyNode node;
    node.block = block;
    if (block.count() < 2 || stop(block)) return node;

    const double h_b = h.evaluate(block);
    auto g = [&](const Subset& u) {
        return h.evaluate(u) + h.evaluate(block.difference(u)) - h_b;
    };
    CachingOracle g_oracle(g);
    std::vector<Subset> singles;
    block.for_each([&](int i) { singles.push_back(Subset::of(n, {i})); });
    std::vector<CandidateCut> candidates =
        queyranne_candidates(g_oracle, MergeState(n, std::move(singles), false));

    int best = 0;
    for (int i = 1; i < static_cast<int>(candidates.size()); ++i)
        if (candidates[i].loss < candidates[best].loss) best = i;

    node.split_loss = candidates[best].loss;
    Subset u = candidates[best].side;
    node.children.push_back(hierarchical_split(h, n, u, stop));
    node.children.push_back(hierarchical_split(h, n, block.difference(u), stop));
    return node;
}

}  // namespace detail

/** Recursively bipartition the system until stop(block) holds (default:
 *  block has at most two elements).  Plumbing for exploratory use. */
template <EntropySystem S>
HierarchyNode hierarchical_bipartition(const S& sys,
                                       std::function<bool(const Subset&)> stop = {}) {
    const int n = sys.size();
    if (n < 2) throw invalid_input("a bipartition needs at least two elements");
    if (!stop) stop = [](const Subset& b) { return b.count() <= 2; };
    CachingOracle h([&sys](const Subset& m) { return sys.entropy(m); });
    return detail::hierarchical_split(h, n, Subset::full(n), stop);
}

}  // namespace mip
