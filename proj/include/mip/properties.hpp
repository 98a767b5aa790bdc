#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mip/oracle.hpp"
#include "mip/rng.hpp"
#include "mip/subset.hpp"

namespace mip {

/** Uniformly random subset: each element joins with probability 1/2. */
inline Subset random_subset(Rng& rng, int n) {
    Subset s(n);
    for (int i = 0; i < n; ++i)
        if (rng.bits() >> 63) s.add(i);
    return s;
}

struct PropertyViolation {
    Subset x, y;
    double margin;  // how far past the tolerance the inequality failed
};

struct PropertyReport {
    std::uint64_t trials = 0;
    double worst_margin = 0.0;  // most negative slack seen (0 if all passed)
    std::vector<PropertyViolation> violations;

    bool ok() const { return violations.empty(); }
};

/** Submodularity: f(X) + f(Y) >= f(X|Y) + f(X&Y) - tol on random pairs. */
template <LossOracle O>
PropertyReport check_submodular(O& oracle, int n, int trials, double tol, std::uint64_t seed) {
    Rng rng(seed);
    PropertyReport report;
    for (int k = 0; k < trials; ++k) {
        Subset x = random_subset(rng, n);
        Subset y = random_subset(rng, n);
        ++report.trials;
        double slack = oracle.evaluate(x) + oracle.evaluate(y) - oracle.evaluate(x | y) -
                       oracle.evaluate(x & y);
        if (slack < report.worst_margin) report.worst_margin = slack;
        if (slack < -tol) report.violations.push_back({x, y, slack});
    }
    return report;
}

/** Symmetry: |f(S) - f(complement)| <= tol on random subsets. */
template <LossOracle O>
PropertyReport check_symmetric(O& oracle, int n, int trials, double tol, std::uint64_t seed) {
    Rng rng(seed);
    PropertyReport report;
    for (int k = 0; k < trials; ++k) {
        Subset s = random_subset(rng, n);
        Subset c = s.complement();
        ++report.trials;
        double gap = oracle.evaluate(s) - oracle.evaluate(c);
        double slack = -std::abs(gap);
        if (slack < report.worst_margin) report.worst_margin = slack;
        if (slack < -tol) report.violations.push_back({s, c, slack});
    }
    return report;
}

/** Diminishing returns along nested sets: for X inside Y and z outside Y,
 *  f(X+z) - f(X) >= f(Y+z) - f(Y) - tol.  Trials with no usable z (Y full)
 *  are redrawn via the z slot of the stream, so `trials` checks happen. */
template <LossOracle O>
PropertyReport check_diminishing_returns(O& oracle, int n, int trials, double tol,
                                         std::uint64_t seed) {
    Rng rng(seed);
    PropertyReport report;
    for (int k = 0; k < trials; ++k) {
        Subset x = random_subset(rng, n);
        Subset y = x | random_subset(rng, n);
        if (y.is_full()) {
            // drop a uniformly chosen element from Y (and X) to leave room for z
            int drop = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            y.remove(drop);
            x.remove(drop);
        }
        Subset outside = y.complement();
        std::vector<int> pool = outside.indices();
        int z = pool[rng.below(pool.size())];
        ++report.trials;
        double slack = (oracle.evaluate(Subset(x).add(z)) - oracle.evaluate(x)) -
                       (oracle.evaluate(Subset(y).add(z)) - oracle.evaluate(y));
        if (slack < report.worst_margin) report.worst_margin = slack;
        if (slack < -tol) report.violations.push_back({x, Subset(y).add(z), slack});
    }
    return report;
}

}  // namespace mip
