#pragma once

// Independent reference implementations used to validate the library.
// Everything here is written the slow, obvious way on purpose and shares no
// code with the headers under test.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace refimpl {

/** Determinant by cofactor expansion along the first row.  O(n!), fine for
 *  the small matrices these tests use. */
inline double det_cofactor(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 1) return m(0, 0);
    double det = 0.0;
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        det += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * det_cofactor(minor);
    }
    return det;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (std::size_t i = 0; i < idx.size(); ++i) out(i, j) = m(idx[i], idx[j]);
    return out;
}

/** log2 |Sigma_idx| straight from the cofactor determinant. */
inline double logdet2_cofactor(const Eigen::MatrixXd& sigma, const std::vector<int>& idx) {
    return std::log2(det_cofactor(submatrix(sigma, idx)));
}

inline std::vector<int> mask_to_indices(std::uint32_t mask, int n) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) idx.push_back(i);
    return idx;
}

/** Bipartition loss log2|S_M| + log2|S_Mc| - log2|S|, from cofactor
 *  determinants only. */
inline double loss_cofactor(const Eigen::MatrixXd& sigma, std::uint32_t mask) {
    const int n = static_cast<int>(sigma.rows());
    const std::uint32_t all = (1u << n) - 1;
    return logdet2_cofactor(sigma, mask_to_indices(mask, n)) +
           logdet2_cofactor(sigma, mask_to_indices(all & ~mask, n)) -
           logdet2_cofactor(sigma, mask_to_indices(all, n));
}

/** Minimum bipartition loss by a plain mask loop (no Gray code, no pruning).
 *  Returns (best mask, best loss); the mask excludes element n-1 so each
 *  unordered pair appears once. */
inline std::pair<std::uint32_t, double> brute_min_bipartition(
    int n, const std::function<double(std::uint32_t)>& loss) {
    std::uint32_t best_mask = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
        double v = loss(mask);
        if (v < best) {
            best = v;
            best_mask = mask;
        }
    }
    return {best_mask, best};
}

/** Minimum k-partition loss by assigning each element a block id directly
 *  (labelled assignments, so every partition is visited k! times — slower
 *  than necessary but maximally independent of the code under test). */
inline double brute_min_kpartition(int n, int k,
                                   const std::function<double(const std::vector<int>&)>& loss) {
    std::vector<int> assign(n, 0);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(k);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        std::vector<char> used(k, 0);
        for (int i = 0; i < n; ++i) {
            assign[i] = static_cast<int>(c % k);
            used[assign[i]] = 1;
            c /= k;
        }
        bool all_used = true;
        for (int b = 0; b < k; ++b) all_used = all_used && used[b];
        if (!all_used) continue;
        double v = loss(assign);
        if (v < best) best = v;
    }
    return best;
}

/** Shannon entropy (bits) of a probability vector. */
inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

/** Mutual information of a two-variable joint table by the textbook double
 *  loop over p(x,y) log2( p(x,y) / (p(x) p(y)) ). */
inline double mi_double_loop(const std::vector<std::vector<double>>& joint) {
    std::vector<double> px(joint.size(), 0.0), py(joint[0].size(), 0.0);
    for (std::size_t x = 0; x < joint.size(); ++x)
        for (std::size_t y = 0; y < joint[0].size(); ++y) {
            px[x] += joint[x][y];
            py[y] += joint[x][y];
        }
    double mi = 0.0;
    for (std::size_t x = 0; x < joint.size(); ++x)
        for (std::size_t y = 0; y < joint[0].size(); ++y) {
            double p = joint[x][y];
            if (p > 0.0) mi += p * std::log2(p / (px[x] * py[y]));
        }
    return mi;
}

/** One step of the weakened-link lattice, written site by site from the
 *  update equations rather than via weight arrays.  Zero-based j is the
 *  site left of the weakened link. */
inline std::vector<double> cml_step_by_equations(const std::vector<double>& x, double a,
                                                 double eps, double delta, int j) {
    const int n = static_cast<int>(x.size());
    auto f = [a](double v) { return 1.0 - a * v * v; };
    std::vector<double> nx(n);
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            double right = (j == 1) ? (1.0 - delta) * eps : eps;
            nx[i] = (1.0 - eps) * f(x[0]) + right * f(x[1]);
        } else if (i == n - 1) {
            double left = (j == n - 3) ? (1.0 - delta) * eps : eps;
            nx[i] = (1.0 - eps) * f(x[i]) + left * f(x[i - 1]);
        } else if (i == j - 1) {
            nx[i] = (1.0 - eps) * f(x[i]) + (eps / 2) * f(x[i - 1]) + (1.0 - delta) * eps * f(x[i + 1]);
        } else if (i == j) {
            nx[i] = (1.0 - eps) * f(x[i]) + (eps / 2) * f(x[i - 1]) + delta * eps * f(x[i + 1]);
        } else if (i == j + 1) {
            nx[i] = (1.0 - eps) * f(x[i]) + delta * eps * f(x[i - 1]) + (eps / 2) * f(x[i + 1]);
        } else if (i == j + 2) {
            nx[i] = (1.0 - eps) * f(x[i]) + (1.0 - delta) * eps * f(x[i - 1]) + (eps / 2) * f(x[i + 1]);
        } else {
            nx[i] = (1.0 - eps) * f(x[i]) + (eps / 2) * f(x[i - 1]) + (eps / 2) * f(x[i + 1]);
        }
    }
    return nx;
}

}  // namespace refimpl
