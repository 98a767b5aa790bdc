#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mip/errors.hpp"
#include "mip/subset.hpp"

namespace mip {

/** A discrete joint distribution over n variables given as a flattened
 *  probability table (C order: the last variable varies fastest).  Capped at
 *  2^20 cells.  Entropies are Shannon entropies in bits, so the bipartition
 *  loss H(M) + H(Mc) - H(V) is the classic mutual information. */
class DiscreteSystem {
public:
    static DiscreteSystem from_table(std::vector<int> dims, std::vector<double> p) {
        return DiscreteSystem(std::move(dims), std::move(p));
    }

    int size() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<double>& table() const { return p_; }
    GroundSet ground() const { return GroundSet(size()); }

    /** Shannon entropy (bits) of the marginal over m. */
    double entropy(const Subset& m) const {
        check_ground(m);
        if (m.empty()) throw invalid_input("entropy of the empty subset is undefined");
        std::vector<double> q = marginal_table(m);
        double h = 0.0;
        for (double v : q)
            if (v > 0.0) h -= v * std::log2(v);
        return h;
    }

    /** I(M; complement) in bits.  Requires a proper nonempty subset. */
    double mutual_information(const Subset& m) const {
        check_ground(m);
        const int c = m.count();
        if (c == 0 || c == size())
            throw invalid_input("mutual information needs a proper nonempty subset");
        return entropy(m) + entropy(m.complement()) - entropy(Subset::full(size()));
    }

    /** mutual_information extended by loss(empty) = loss(full) = 0. */
    double loss(const Subset& m) const {
        const int c = m.count();
        if (c == 0 || c == size()) return 0.0;
        return mutual_information(m);
    }

    /** Subsystem over the given variables (marginalizing out the rest). */
    DiscreteSystem marginal(const Subset& m) const {
        check_ground(m);
        if (m.empty()) throw invalid_input("marginal of the empty subset is undefined");
        std::vector<int> keep = m.indices();
        std::vector<int> sub_dims;
        sub_dims.reserve(keep.size());
        for (int i : keep) sub_dims.push_back(dims_[i]);
        return DiscreteSystem(std::move(sub_dims), marginal_table(m));
    }

private:
    DiscreteSystem(std::vector<int> dims, std::vector<double> p)
        : dims_(std::move(dims)), p_(std::move(p)) {
        if (dims_.empty()) throw invalid_input("discrete system needs at least one variable");
        std::uint64_t cells = 1;
        for (int d : dims_) {
            if (d < 1) throw invalid_input("every variable needs at least one state");
            cells *= static_cast<std::uint64_t>(d);
            if (cells > (1u << 20)) throw invalid_input("probability table exceeds 2^20 cells");
        }
        if (p_.size() != cells) throw invalid_input("table size does not match variable cardinalities");
        double total = 0.0;
        for (double v : p_) {
            if (!(v >= -1e-12) || !std::isfinite(v))
                throw invalid_input("probabilities must be nonnegative");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw invalid_input("probabilities must sum to 1 within 1e-9");
        for (double& v : p_) v = std::max(v, 0.0) / total;
        strides_.assign(dims_.size(), 1);
        for (int i = size() - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * dims_[i + 1];
    }

    void check_ground(const Subset& m) const {
        if (m.ground_size() != size()) throw invalid_input("subset belongs to a different ground set");
    }

    std::vector<double> marginal_table(const Subset& m) const {
        std::vector<int> keep = m.indices();
        std::uint64_t out_cells = 1;
        for (int i : keep) out_cells *= static_cast<std::uint64_t>(dims_[i]);
        std::vector<double> q(out_cells, 0.0);
        for (std::size_t cell = 0; cell < p_.size(); ++cell) {
            std::uint64_t idx = 0;
            for (int i : keep) {
                int digit = static_cast<int>(cell / strides_[i]) % dims_[i];
                idx = idx * static_cast<std::uint64_t>(dims_[i]) + static_cast<std::uint64_t>(digit);
            }
            q[idx] += p_[cell];
        }
        return q;
    }

    std::vector<int> dims_;
    std::vector<double> p_;
    std::vector<std::uint64_t> strides_;
};

}  // namespace mip
