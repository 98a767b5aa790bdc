#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mip/errors.hpp"
#include "mip/rng.hpp"

namespace mip {

/** t-by-n matrix of iid standard normal draws (rows = observations). */
inline Eigen::MatrixXd gen_gaussian_samples(int n, int t, std::uint64_t seed) {
    if (n < 1 || t < 1) throw invalid_input("need at least one variable and one observation");
    Rng rng(seed);
    Eigen::MatrixXd data(t, n);
    for (int r = 0; r < t; ++r)
        for (int c = 0; c < n; ++c) data(r, c) = rng.normal();
    return data;
}

struct BlockCorrelatedParams {
    int block_size = 20;
    int n_blocks = 2;
    int samples = 1000;
    double lambda = 0.1;  // share of the common (rank-one mixing) component
    std::uint64_t seed = 0;
};

/** Samples whose variables form independent, internally entangled blocks.
 *  Each block takes iid normal data X = U S V^T and remixes the factors
 *  U S through lambda * ones + (1 - lambda) * G with G a fresh iid normal
 *  matrix: every variable in a block is then a random linear blend of the
 *  same latent factors (strong within-block dependence, random-signed
 *  correlations) plus a small shared component, while different blocks
 *  stay exactly independent.  The minimum-loss bipartition of the result
 *  is a block boundary. */
inline Eigen::MatrixXd gen_block_correlated(const BlockCorrelatedParams& p) {
    if (p.block_size < 1 || p.n_blocks < 1) throw invalid_input("block sizes must be positive");
    if (p.samples < 2) throw invalid_input("need at least two observations");
    if (!(p.lambda >= 0.0 && p.lambda <= 1.0)) throw invalid_input("lambda must be in [0,1]");
    const int b = p.block_size;
    Eigen::MatrixXd out(p.samples, b * p.n_blocks);
    for (int blk = 0; blk < p.n_blocks; ++blk) {
        Rng rng(mix_seed(p.seed, static_cast<std::uint64_t>(blk)));
        Eigen::MatrixXd x(p.samples, b);
        for (int r = 0; r < p.samples; ++r)
            for (int c = 0; c < b; ++c) x(r, c) = rng.normal();
        Eigen::MatrixXd mix(b, b);
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < b; ++c) mix(r, c) = p.lambda + (1.0 - p.lambda) * rng.normal();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
        Eigen::MatrixXd us = svd.matrixU() * svd.singularValues().asDiagonal();
        out.middleCols(blk * b, b).noalias() = us * mix;
    }
    return out;
}

/** Coupled map lattice: n logistic maps f(x) = 1 - a x^2 on a chain with
 *  diffusive coupling eps, where one link (between weak_link_site and its
 *  right neighbour, zero-based) is weakened by delta.  delta = 1/2 restores
 *  the uniform chain (bit for bit when the modified sites are interior);
 *  delta = 0 decouples the two halves. */
struct CmlParams {
    int n = 30;
    double a = 1.8950;
    double eps = 0.1;
    double delta = 0.5;
    int t_total = 10000;     // retained steps
    int t_transient = 1000;  // discarded leading steps
    int weak_link_site = 19;
    std::uint64_t seed = 0;
};

struct CmlStencil {
    std::vector<double> self_w, left_w, right_w;  // x'_i = self*f(x_i) + left*f(x_{i-1}) + right*f(x_{i+1})
};

/** Per-site update weights for the lattice.  All sites keep self weight
 *  1 - eps; ends couple with eps to their only neighbour, interior sites
 *  with eps/2 to each; the four sites around the weak link trade eps/2 for
 *  delta*eps or (1-delta)*eps on the link side.  Note the rows next to the
 *  link sum to 1 + eps*(1/2 - delta): for delta < 1/2 the map is slightly
 *  expansive there and trajectories can escape (see simulate_cml). */
inline CmlStencil cml_stencil(const CmlParams& p) {
    if (p.n < 4) throw invalid_input("lattice needs at least 4 sites");
    if (!(p.eps >= 0.0 && p.eps <= 1.0)) throw invalid_input("eps must be in [0,1]");
    if (!(p.delta >= 0.0 && p.delta <= 0.5)) throw invalid_input("delta must be in [0,1/2]");
    const int j = p.weak_link_site;
    if (j < 1 || j > p.n - 3)
        throw invalid_input("weak link site must be in [1, n-3] so all modified sites exist");
    CmlStencil s;
    s.self_w.assign(p.n, 1.0 - p.eps);
    s.left_w.assign(p.n, p.eps / 2);
    s.right_w.assign(p.n, p.eps / 2);
    s.left_w[0] = 0.0;
    s.right_w[0] = p.eps;
    s.right_w[p.n - 1] = 0.0;
    s.left_w[p.n - 1] = p.eps;
    s.right_w[j - 1] = (1.0 - p.delta) * p.eps;
    s.right_w[j] = p.delta * p.eps;
    s.left_w[j + 1] = p.delta * p.eps;
    s.left_w[j + 2] = (1.0 - p.delta) * p.eps;
    return s;
}

/** Simulate the lattice from uniform(-1,1) initial states; returns the
 *  retained t_total-by-n trajectory.  States are never clamped; if any
 *  |x| exceeds 1e10 the trajectory has escaped and a numeric error is
 *  raised naming the step. */
inline Eigen::MatrixXd simulate_cml(const CmlParams& p) {
    if (p.t_total < 1 || p.t_transient < 0) throw invalid_input("step counts must be positive");
    CmlStencil w = cml_stencil(p);
    Rng rng(p.seed);
    const int n = p.n;
    std::vector<double> x(n), fx(n), next(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);

    Eigen::MatrixXd out(p.t_total, n);
    const int total = p.t_transient + p.t_total;
    for (int step = 0; step < total; ++step) {
        for (int i = 0; i < n; ++i) fx[i] = 1.0 - p.a * x[i] * x[i];
        for (int i = 0; i < n; ++i) {
            double v = w.self_w[i] * fx[i];
            if (i > 0) v += w.left_w[i] * fx[i - 1];
            if (i + 1 < n) v += w.right_w[i] * fx[i + 1];
            next[i] = v;
        }
        x.swap(next);
        for (int i = 0; i < n; ++i) {
            if (!(std::abs(x[i]) <= 1e10))
                throw numeric_error("lattice diverged at step " + std::to_string(step));
        }
        if (step >= p.t_transient) {
            for (int i = 0; i < n; ++i) out(step - p.t_transient, i) = x[i];
        }
    }
    return out;
}

}  // namespace mip
