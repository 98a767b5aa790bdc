#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "mip/errors.hpp"
#include "mip/gaussian.hpp"
#include "mip/merge.hpp"
#include "mip/oracle.hpp"
#include "mip/subset.hpp"

namespace mip {

/** Outcome of one pendent-pair chain: the chain ordering over effective
 *  element ids, with (t, u) its last two entries.  u's singleton {u} is
 *  guaranteed optimal among all cuts separating u from t. */
struct PendentPair {
    int t = -1;
    int u = -1;
    std::vector<int> ordering;
};

/** One candidate cut collected during the search. */
struct CandidateCut {
    Subset side;
    double loss = 0.0;
};

struct BipartitionResult {
    Subset best;     // canonical side (smaller; lex order breaks size ties)
    double loss = 0.0;
    std::vector<CandidateCut> candidates;  // one per contraction phase
    std::uint64_t oracle_calls = 0;
    double wall_time_seconds = 0.0;
};

struct EvalRecord {
    Subset set;
    double value;
};

/** Every set-function evaluation a search made, for cross-checking one
 *  evaluation strategy against another. */
struct SearchTrace {
    std::vector<EvalRecord> records;
};

/** Build a maximal chain by repeatedly appending the element u minimizing
 *  f(W + u) - f({u}); the last two chain entries form a pendent pair.
 *  Candidates are scanned in element order (ascending smallest member), and
 *  only a strictly smaller key replaces the incumbent, so ties resolve to
 *  the lex-least candidate.  The final element is appended without any
 *  evaluation since no choice remains. */
template <LossOracle O>
PendentPair pendent_pair(O& oracle, const MergeState& state, int start = 0) {
    const int m = state.size();
    if (m < 2) throw invalid_input("pendent pair needs at least two effective elements");
    if (start < 0 || start >= m) throw invalid_input("chain start element out of range");

    PendentPair out;
    out.ordering.reserve(m);
    std::vector<char> in_chain(m, 0);
    Subset w = state.flat(start);
    in_chain[start] = 1;
    out.ordering.push_back(start);

    std::vector<double> single(m, 0.0);
    for (int step = 1; step < m; ++step) {
        if (step == m - 1) {
            for (int e = 0; e < m; ++e)
                if (!in_chain[e]) {
                    out.ordering.push_back(e);
                    break;
                }
            break;
        }
        double best_key = std::numeric_limits<double>::infinity();
        int best_e = -1;
        for (int e = 0; e < m; ++e) {
            if (in_chain[e]) continue;
            if (step == 1) single[e] = oracle.evaluate(state.flat(e));
            double key = oracle.evaluate(w | state.flat(e)) - single[e];
            if (key < best_key) {
                best_key = key;
                best_e = e;
            }
        }
        out.ordering.push_back(best_e);
        in_chain[best_e] = 1;
        w = w | state.flat(best_e);
    }
    out.t = out.ordering[m - 2];
    out.u = out.ordering[m - 1];
    return out;
}

/** Run the full contraction loop: one pendent pair per phase, keep {u} as a
 *  candidate cut, merge (t, u), until one element remains.  Returns the n-1
 *  candidates in phase order. */
template <LossOracle O>
std::vector<CandidateCut> queyranne_candidates(O& oracle, MergeState state) {
    std::vector<CandidateCut> out;
    while (state.size() > 1) {
        PendentPair pp = pendent_pair(oracle, state, 0);
        Subset side = state.flat(pp.u);
        out.push_back({side, oracle.evaluate(side)});
        state.merge(pp.t, pp.u);
    }
    return out;
}

namespace detail {

/** Pick the minimum-loss candidate; on exact loss ties prefer the one whose
 *  canonical side is lex-least, so results do not depend on phase order. */
inline void select_best(const std::vector<CandidateCut>& candidates, BipartitionResult& r) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
        if (candidates[i].loss < candidates[best].loss) {
            best = i;
        } else if (candidates[i].loss == candidates[best].loss &&
                   lex_less(canonical_side(candidates[i].side), canonical_side(candidates[best].side))) {
            best = i;
        }
    }
    r.best = canonical_side(candidates[best].side);
    r.loss = candidates[best].loss;
    r.candidates = candidates;
}

}  // namespace detail

/** Exact minimum-loss bipartition of a symmetric submodular set function in
 *  O(n) pendent-pair chains (O(n^3) oracle evaluations overall). */
template <LossOracle O>
BipartitionResult minimize_bipartition(O& oracle, const GroundSet& g) {
    if (g.n < 2) throw invalid_input("a bipartition needs at least two elements");
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t calls0 = oracle.call_count();
    std::vector<CandidateCut> candidates = queyranne_candidates(oracle, MergeState(g));
    BipartitionResult r;
    detail::select_best(candidates, r);
    r.oracle_calls = oracle.call_count() - calls0;
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace detail {

/** Incremental evaluation engine for Gaussian chains.  Uses the identity
 *
 *    log2|Sigma_{V minus S}| = log2|Sigma_V| + log2|Lambda_S|,  Lambda = Sigma^{-1},
 *
 *  so the chain loss I(W) = log2|Sigma_W| + log2|Lambda_W| is a sum of two
 *  principal minors over the *same* growing set W.  Each phase runs one
 *  blocked Cholesky elimination per matrix; a candidate's key needs only the
 *  log-determinant of its diagonal block in the current Schur complements,
 *  which makes a whole phase O(n^3) instead of refactorizing per candidate. */
class GaussianChainEngine {
public:
    explicit GaussianChainEngine(const GaussianSystem& sys)
        : sys_(sys), n_(sys.size()), rs_(n_, n_), rp_(n_, n_), orig_(n_), owner_(n_) {}

    void begin_phase(std::span<const Subset> elements) {
        head_ = 0;
        lw_sigma_ = 0.0;
        lw_prec_ = 0.0;
        positions_.assign(elements.size(), {});
        int p = 0;
        for (int e = 0; e < static_cast<int>(elements.size()); ++e) {
            elements[e].for_each([&](int i) {
                orig_[p] = i;
                owner_[p] = e;
                positions_[e].push_back(p);
                ++p;
            });
        }
        const Eigen::MatrixXd& sigma = sys_.covariance();
        const Eigen::MatrixXd& prec = sys_.precision();
        for (int q = 0; q < n_; ++q)
            for (int i = 0; i < n_; ++i) {
                rs_(i, q) = sigma(orig_[i], orig_[q]);
                rp_(i, q) = prec(orig_[i], orig_[q]);
            }
    }

    /** log2 det of element e's diagonal blocks in the two current Schur
     *  complements.  With W the eliminated set, accumulated_* + these give
     *  log2|Sigma_{W+e}| and log2|Lambda_{W+e}|. */
    std::pair<double, double> candidate_block_logdets(int e) {
        const std::vector<int>& pos = positions_[e];
        const int b = static_cast<int>(pos.size());
        if (static_cast<int>(scratch_.size()) < b * b) scratch_.resize(b * b);
        double lds = gather_and_factor(rs_, pos, b);
        double ldp = gather_and_factor(rp_, pos, b);
        return {lds, ldp};
    }

    /** Move element e into the eliminated set: permute its block to the
     *  front of the active window, factor it, and downdate the trailing
     *  Schur complements of both matrices. */
    void eliminate(int e) {
        const int b = static_cast<int>(positions_[e].size());
        for (int k = 0; k < b; ++k) {
            int target = head_ + k;
            int p = n_;
            for (int q : positions_[e]) {
                if (q >= target && q < p) p = q;
            }
            if (p != target) swap_positions(target, p);
        }
        const int r = n_ - head_ - b;
        lw_sigma_ += factor_block(rs_, b, r);
        lw_prec_ += factor_block(rp_, b, r);
        head_ += b;
    }

    double accumulated_sigma() const { return lw_sigma_; }
    double accumulated_precision() const { return lw_prec_; }

private:
    double gather_and_factor(const Eigen::MatrixXd& m, const std::vector<int>& pos, int b) {
        for (int j = 0; j < b; ++j)
            for (int i = 0; i < b; ++i) scratch_[i + j * b] = m(pos[i], pos[j]);
        auto ld = cholesky_logdet2(scratch_.data(), b, b);
        if (!ld) throw numeric_error("chain residual block lost positive definiteness");
        return *ld;
    }

    double factor_block(Eigen::MatrixXd& m, int b, int r) {
        Eigen::MatrixXd chol = m.block(head_, head_, b, b);
        auto ld = cholesky_logdet2(chol.data(), b, b);
        if (!ld) throw numeric_error("chain residual block lost positive definiteness");
        if (r > 0) {
            // Y^T = L^-1 C^T, trailing -= Y Y^T (the Schur complement step).
            Eigen::MatrixXd yt = m.block(head_ + b, head_, r, b).transpose();
            chol.triangularView<Eigen::Lower>().solveInPlace(yt);
            m.block(head_ + b, head_ + b, r, r).noalias() -= yt.transpose() * yt;
        }
        return *ld;
    }

    void swap_positions(int a, int p) {
        const int len = n_ - head_;
        rs_.col(a).segment(head_, len).swap(rs_.col(p).segment(head_, len));
        rs_.row(a).segment(head_, len).swap(rs_.row(p).segment(head_, len));
        rp_.col(a).segment(head_, len).swap(rp_.col(p).segment(head_, len));
        rp_.row(a).segment(head_, len).swap(rp_.row(p).segment(head_, len));
        std::swap(orig_[a], orig_[p]);
        int oa = owner_[a], op = owner_[p];
        std::swap(owner_[a], owner_[p]);
        for (int& q : positions_[oa])
            if (q == a) q = p;
        for (int& q : positions_[op])
            if (q == p) q = a;
    }

    const GaussianSystem& sys_;
    int n_;
    Eigen::MatrixXd rs_, rp_;  // full symmetric working copies
    std::vector<int> orig_;    // position -> original variable index
    std::vector<int> owner_;   // position -> effective element id
    std::vector<std::vector<int>> positions_;
    std::vector<double> scratch_;
    int head_ = 0;
    double lw_sigma_ = 0.0, lw_prec_ = 0.0;
};

inline BipartitionResult gaussian_fast_minimize(const GaussianSystem& sys, SearchTrace* trace) {
    const int n = sys.size();
    if (n < 2) throw invalid_input("a bipartition needs at least two elements");
    auto t0 = std::chrono::steady_clock::now();

    MergeState state(sys.ground());
    GaussianChainEngine engine(sys);
    std::unordered_map<Subset, double, SubsetHash> single_mi;
    std::uint64_t evals = 0;
    std::vector<CandidateCut> candidates;

    while (state.size() > 1) {
        const int m = state.size();
        engine.begin_phase(state.elements());
        std::vector<double> single(m);
        for (int e = 0; e < m; ++e) {
            const Subset& flat = state.flat(e);
            auto it = single_mi.find(flat);
            if (it != single_mi.end()) {
                single[e] = it->second;
                continue;
            }
            auto [lds, ldp] = engine.candidate_block_logdets(e);
            single[e] = lds + ldp;  // I(flat) via the precision identity
            single_mi.emplace(flat, single[e]);
            ++evals;
            if (trace) trace->records.push_back({flat, single[e]});
        }

        std::vector<char> in_chain(m, 0);
        std::vector<int> order{0};
        order.reserve(m);
        in_chain[0] = 1;
        engine.eliminate(0);
        Subset w_flat = trace ? state.flat(0) : Subset();
        for (int step = 1; step < m; ++step) {
            if (step == m - 1) {
                for (int e = 0; e < m; ++e)
                    if (!in_chain[e]) {
                        order.push_back(e);
                        break;
                    }
                break;
            }
            double best_key = std::numeric_limits<double>::infinity();
            int best_e = -1;
            for (int e = 0; e < m; ++e) {
                if (in_chain[e]) continue;
                auto [lds, ldp] = engine.candidate_block_logdets(e);
                double value = (engine.accumulated_sigma() + lds) + (engine.accumulated_precision() + ldp);
                double key = value - single[e];
                ++evals;
                if (trace) trace->records.push_back({w_flat | state.flat(e), value});
                if (key < best_key) {
                    best_key = key;
                    best_e = e;
                }
            }
            order.push_back(best_e);
            in_chain[best_e] = 1;
            engine.eliminate(best_e);
            if (trace) w_flat = w_flat | state.flat(best_e);
        }

        int t = order[m - 2], u = order[m - 1];
        candidates.push_back({state.flat(u), single[u]});
        state.merge(t, u);
    }

    BipartitionResult r;
    select_best(candidates, r);
    r.oracle_calls = evals;
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

struct GaussianSearchOptions {
    bool fast_path = true;
    SearchTrace* trace = nullptr;  // records every evaluation of the fast path
};

/** Exact minimum mutual-information bipartition of a Gaussian system.  The
 *  default incremental path and the plain refactorizing path produce the
 *  same chains up to floating-point ties; if the incremental path hits a
 *  conditioning problem it falls back to the plain one. */
inline BipartitionResult minimize_bipartition(const GaussianSystem& sys,
                                              const GaussianSearchOptions& opts = {}) {
    if (opts.fast_path) {
        try {
            return detail::gaussian_fast_minimize(sys, opts.trace);
        } catch (const numeric_error&) {
            // fall through to the reference path
        }
    }
    CachingOracle oracle([&sys](const Subset& s) { return sys.loss(s); });
    return minimize_bipartition(oracle, sys.ground());
}

}  // namespace mip
