#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mip/datagen.hpp"
#include "mip/errors.hpp"
#include "mip/exhaustive.hpp"
#include "mip/gaussian.hpp"
#include "mip/parallel.hpp"
#include "mip/queyranne.hpp"
#include "mip/rng.hpp"
#include "mip/subset.hpp"

namespace mip {

// ---------------------------------------------------------------------------
// Coupled-map-lattice sweep: how often does the minimum-loss bipartition
// recover the weak link as delta varies?
// ---------------------------------------------------------------------------

struct CmlSweepConfig {
    CmlParams base;                   // delta and seed fields are overridden per point/run
    std::vector<double> deltas = {0.0, 0.125, 0.25, 0.375, 0.5};
    int runs = 50;
    std::uint64_t seed = 0;
    int max_retries = 50;  // re-seeds allowed per run when a trajectory escapes
    int threads = 0;
};

struct CmlSweepPoint {
    double delta = 0.0;
    int runs = 0;
    int recovered = 0;   // runs whose minimum cut is exactly the weak link
    int divergent = 0;   // escaped trajectories that were re-seeded
    double p_hat = 0.0;  // recovered / runs
};

/** One lattice realization, re-seeding deterministically while the
 *  trajectory escapes.  Returns the retained trajectory and counts the
 *  escaped attempts in `divergent`. */
inline Eigen::MatrixXd simulate_cml_with_retries(CmlParams p, std::uint64_t run_seed,
                                                 int max_retries, int& divergent) {
    for (int retry = 0; retry <= max_retries; ++retry) {
        p.seed = mix_seed(run_seed, 1000 + static_cast<std::uint64_t>(retry));
        try {
            return simulate_cml(p);
        } catch (const numeric_error&) {
            ++divergent;
        }
    }
    throw numeric_error("lattice kept diverging after " + std::to_string(max_retries) +
                        " re-seeds");
}

inline std::vector<CmlSweepPoint> cml_partition_sweep(const CmlSweepConfig& cfg) {
    if (cfg.runs < 1) throw invalid_input("sweep needs at least one run");
    if (cfg.deltas.empty()) throw invalid_input("sweep needs at least one delta");
    const int n = cfg.base.n;
    const int j = cfg.base.weak_link_site;
    const Subset right_half = Subset::range(n, j + 1, n - 1);
    const Subset target = canonical_side(right_half);

    std::vector<CmlSweepPoint> points(cfg.deltas.size());
    for (std::size_t d = 0; d < cfg.deltas.size(); ++d) {
        CmlSweepPoint& pt = points[d];
        pt.delta = cfg.deltas[d];
        pt.runs = cfg.runs;
        std::vector<char> hit(cfg.runs, 0);
        std::vector<int> escaped(cfg.runs, 0);
        parallel_for(
            0, cfg.runs,
            [&](int run) {
                CmlParams p = cfg.base;
                p.delta = cfg.deltas[d];
                std::uint64_t run_seed = mix_seed(mix_seed(cfg.seed, d), static_cast<std::uint64_t>(run));
                Eigen::MatrixXd data =
                    simulate_cml_with_retries(p, run_seed, cfg.max_retries, escaped[run]);
                GaussianSystem sys = GaussianSystem::from_samples(data);
                BipartitionResult r = minimize_bipartition(sys);
                hit[run] = (r.best == target) ? 1 : 0;
            },
            cfg.threads);
        for (int run = 0; run < cfg.runs; ++run) {
            pt.recovered += hit[run];
            pt.divergent += escaped[run];
        }
        pt.p_hat = static_cast<double>(pt.recovered) / cfg.runs;
    }
    return points;
}

// ---------------------------------------------------------------------------
// Block-correlated recovery: fraction of sampled systems whose minimum cut
// is a full block.
// ---------------------------------------------------------------------------

struct BlockRecoveryResult {
    int runs = 0;
    int recovered = 0;
};

inline BlockRecoveryResult block_recovery_study(const BlockCorrelatedParams& base, int runs,
                                                std::uint64_t seed, int threads = 0) {
    if (runs < 1) throw invalid_input("study needs at least one run");
    const int n = base.block_size * base.n_blocks;
    std::vector<Subset> blocks;
    for (int b = 0; b < base.n_blocks; ++b)
        blocks.push_back(Subset::range(n, b * base.block_size, (b + 1) * base.block_size - 1));

    std::vector<char> hit(runs, 0);
    parallel_for(
        0, runs,
        [&](int run) {
            BlockCorrelatedParams p = base;
            p.seed = mix_seed(seed, static_cast<std::uint64_t>(run));
            GaussianSystem sys = GaussianSystem::from_samples(gen_block_correlated(p));
            BipartitionResult r = minimize_bipartition(sys);
            for (const Subset& blk : blocks) {
                if (r.best == canonical_side(blk)) {
                    hit[run] = 1;
                    break;
                }
            }
        },
        threads);

    BlockRecoveryResult out;
    out.runs = runs;
    for (int run = 0; run < runs; ++run) out.recovered += hit[run];
    return out;
}

// ---------------------------------------------------------------------------
// Timing sweeps and scaling fits.
// ---------------------------------------------------------------------------

struct BenchRow {
    std::string algo;
    int n = 0;
    double seconds = 0.0;  // fastest of `reps` searches
    std::uint64_t calls = 0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw invalid_input("line fit needs two or more points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / m;
    return f;
}

enum class BenchAlgo { queyranne, exhaustive };

inline const char* to_string(BenchAlgo a) {
    return a == BenchAlgo::queyranne ? "queyranne" : "exhaustive";
}

/** Time one search (search only — preparing the system, its precision
 *  matrix, and the exhaustive path's log-det table are all excluded) on a
 *  random sampled system.  Runs `reps` repetitions, keeps the fastest. */
inline BenchRow bench_one(BenchAlgo algo, int n, int samples, std::uint64_t seed, int reps = 3) {
    if (reps < 1) throw invalid_input("need at least one repetition");
    GaussianSystem sys = GaussianSystem::from_samples(
        gen_gaussian_samples(n, samples, mix_seed(seed, static_cast<std::uint64_t>(n))));
    std::optional<SubsetLogdetTable> table;
    if (algo == BenchAlgo::exhaustive && n <= 20) table.emplace(sys);
    BenchRow row;
    row.algo = to_string(algo);
    row.n = n;
    row.seconds = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < reps; ++rep) {
        if (algo == BenchAlgo::queyranne) {
            BipartitionResult r = minimize_bipartition(sys);
            row.seconds = std::min(row.seconds, r.wall_time_seconds);
            row.calls = r.oracle_calls;
        } else {
            ExhaustiveResult r =
                table ? exhaustive_bipartition(sys, *table) : exhaustive_bipartition(sys);
            row.seconds = std::min(row.seconds, r.wall_time_seconds);
            row.calls = r.evaluations;
        }
    }
    return row;
}

/** Scaling exponent: slope of log2(seconds) against log2(n). */
inline LineFit loglog_fit(std::span<const BenchRow> rows) {
    std::vector<double> x, y;
    for (const BenchRow& r : rows) {
        x.push_back(std::log2(static_cast<double>(r.n)));
        y.push_back(std::log2(r.seconds));
    }
    return fit_line(x, y);
}

/** Exponential-growth rate: slope of log2(seconds) against n. */
inline LineFit semilog_fit(std::span<const BenchRow> rows) {
    std::vector<double> x, y;
    for (const BenchRow& r : rows) {
        x.push_back(static_cast<double>(r.n));
        y.push_back(std::log2(r.seconds));
    }
    return fit_line(x, y);
}

}  // namespace mip
