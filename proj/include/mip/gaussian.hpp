#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "mip/errors.hpp"
#include "mip/subset.hpp"

namespace mip {

/** Regularization ladder for covariance factorizations: on a Cholesky
 *  failure, add eps * (trace/n) * I with eps escalating through the steps
 *  below, then give up with a numeric error. */
struct JitterPolicy {
    double steps[3] = {1e-12, 1e-10, 1e-8};
    double symmetry_rel_tol = 1e-8;
};

namespace detail {

constexpr double kLog2E = 1.4426950408889634074;  // 1/ln(2)

/** In-place lower Cholesky of the leading k-by-k block of a (column-major,
 *  leading dimension lda).  Returns log2(det) on success, nothing if a pivot
 *  is not positive.  Kept allocation-free: this sits on hot evaluate paths. */
inline std::optional<double> cholesky_logdet2(double* a, int k, int lda) {
    double logdet = 0.0;
    for (int j = 0; j < k; ++j) {
        double d = a[j + j * lda];
        for (int t = 0; t < j; ++t) d -= a[j + t * lda] * a[j + t * lda];
        if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
        double l = std::sqrt(d);
        a[j + j * lda] = l;
        logdet += std::log(d);
        double inv = 1.0 / l;
        for (int i = j + 1; i < k; ++i) {
            double s = a[i + j * lda];
            for (int t = 0; t < j; ++t) s -= a[i + t * lda] * a[j + t * lda];
            a[i + j * lda] = s * inv;
        }
    }
    return logdet * kLog2E;
}

inline void check_square_symmetric(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw invalid_input("matrix must be square and nonempty");
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= rel_tol * scale))
        throw invalid_input("matrix is not symmetric within tolerance");
}

}  // namespace detail

/** log2(det(m)) for a symmetric positive (semi)definite matrix, applying the
 *  jitter ladder if the factorization fails.  If jitter_used is given, the
 *  diagonal shift actually applied is stored there (0 when none was needed). */
inline double logdet_psd(const Eigen::MatrixXd& m, const JitterPolicy& policy = {},
                         double* jitter_used = nullptr) {
    detail::check_square_symmetric(m, policy.symmetry_rel_tol);
    const int n = static_cast<int>(m.rows());
    double base = m.trace() / n;
    if (!(base > 0.0)) base = 1.0;  // trace can vanish (e.g. all-constant data)
    Eigen::MatrixXd work = (m + m.transpose()) / 2.0;
    double shift = 0.0;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::MatrixXd trial = work;
        if (shift > 0.0) trial.diagonal().array() += shift;
        auto ld = detail::cholesky_logdet2(trial.data(), n, n);
        if (ld) {
            if (jitter_used) *jitter_used = shift;
            return *ld;
        }
        if (attempt < 3) shift = policy.steps[attempt] * base;
    }
    throw numeric_error("matrix is not positive definite even after jitter");
}

/** Unbiased sample covariance (divisor T-1) of a T-by-n data matrix with
 *  rows as observations. */
inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data) {
    const auto t = data.rows();
    if (t < 2) throw invalid_input("need at least two observations for a covariance");
    Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    return (centered.transpose() * centered) / static_cast<double>(t - 1);
}

/** A multivariate Gaussian described by its covariance.  Construction
 *  symmetrizes, applies the jitter ladder until the full covariance factors,
 *  and precomputes the precision matrix; all entropies are in bits and drop
 *  the dimension-dependent Gaussian constant, i.e. entropy(m) = log2|Sigma_m|. */
class GaussianSystem {
public:
    static GaussianSystem from_covariance(const Eigen::MatrixXd& sigma, JitterPolicy policy = {}) {
        return GaussianSystem(sigma, policy);
    }

    /** Covariance estimated from samples (rows = observations). */
    static GaussianSystem from_samples(const Eigen::MatrixXd& data, JitterPolicy policy = {}) {
        return GaussianSystem(sample_covariance(data), policy);
    }

    int size() const { return n_; }
    GroundSet ground() const { return GroundSet(n_); }

    /** Effective covariance: symmetrized input plus any jitter applied. */
    const Eigen::MatrixXd& covariance() const { return sigma_; }
    const Eigen::MatrixXd& precision() const { return precision_; }

    /** Diagonal shift applied at construction (0 if none was needed). */
    double jitter() const { return jitter_; }

    /** log2|Sigma| of the full system. */
    double logdet_full() const { return logdet_full_; }

    /** log2|Sigma_m| (differential entropy in bits, constant dropped). */
    double entropy(const Subset& m) const {
        check_ground(m);
        if (m.empty()) throw invalid_input("entropy of the empty subset is undefined");
        return logdet_sub(sigma_, m.indices());
    }

    /** I(M; complement) in bits: log2|Sigma_M| + log2|Sigma_Mc| - log2|Sigma|.
     *  Requires a proper nonempty subset. */
    double mutual_information(const Subset& m) const {
        check_ground(m);
        const int c = m.count();
        if (c == 0 || c == n_)
            throw invalid_input("mutual information needs a proper nonempty subset");
        return logdet_sub(sigma_, m.indices()) + logdet_sub(sigma_, m.complement().indices()) -
               logdet_full_;
    }

    /** mutual_information extended by loss(empty) = loss(full) = 0, so it is a
     *  total set function usable by generic property checks and oracles. */
    double loss(const Subset& m) const {
        const int c = m.count();
        if (c == 0 || c == n_) return 0.0;
        return mutual_information(m);
    }

    /** Subsystem over the given indices (order preserved ascending). */
    GaussianSystem marginal(const Subset& m) const {
        check_ground(m);
        if (m.empty()) throw invalid_input("marginal of the empty subset is undefined");
        std::vector<int> idx = m.indices();
        const int k = static_cast<int>(idx.size());
        Eigen::MatrixXd block(k, k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i) block(i, j) = sigma_(idx[i], idx[j]);
        return GaussianSystem(block, policy_);
    }

    const JitterPolicy& policy() const { return policy_; }

private:
    GaussianSystem(const Eigen::MatrixXd& sigma, JitterPolicy policy) : policy_(policy) {
        detail::check_square_symmetric(sigma, policy_.symmetry_rel_tol);
        n_ = static_cast<int>(sigma.rows());
        sigma_ = (sigma + sigma.transpose()) / 2.0;
        logdet_full_ = logdet_psd(sigma_, policy_, &jitter_);
        if (jitter_ > 0.0) sigma_.diagonal().array() += jitter_;
        Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
        if (llt.info() != Eigen::Success)
            throw numeric_error("covariance failed to factor after jitter");
        precision_ = llt.solve(Eigen::MatrixXd::Identity(n_, n_));
        precision_ = ((precision_ + precision_.transpose()) / 2.0).eval();
    }

    void check_ground(const Subset& m) const {
        if (m.ground_size() != n_) throw invalid_input("subset belongs to a different ground set");
    }

    /** log2 det of the principal submatrix over idx, with a local jitter
     *  retry should roundoff make an extremely ill-conditioned block fail. */
    double logdet_sub(const Eigen::MatrixXd& src, const std::vector<int>& idx) const {
        const int k = static_cast<int>(idx.size());
        thread_local std::vector<double> scratch;
        if (static_cast<int>(scratch.size()) < k * k) scratch.resize(k * k);
        double shift = 0.0;
        for (int attempt = 0; attempt <= 3; ++attempt) {
            double base = 0.0;
            for (int j = 0; j < k; ++j) {
                const double* col = src.data() + static_cast<std::ptrdiff_t>(idx[j]) * n_;
                double* out = scratch.data() + static_cast<std::ptrdiff_t>(j) * k;
                for (int i = 0; i < k; ++i) out[i] = col[idx[i]];
                base += scratch[j + j * k];
            }
            if (shift > 0.0)
                for (int j = 0; j < k; ++j) scratch[j + j * k] += shift;
            auto ld = detail::cholesky_logdet2(scratch.data(), k, k);
            if (ld) return *ld;
            double scale = base / k;
            if (!(scale > 0.0)) scale = 1.0;
            if (attempt < 3) shift = policy_.steps[attempt] * scale;
        }
        throw numeric_error("principal submatrix is not positive definite even after jitter");
    }

    int n_ = 0;
    Eigen::MatrixXd sigma_;
    Eigen::MatrixXd precision_;
    double logdet_full_ = 0.0;
    double jitter_ = 0.0;
    JitterPolicy policy_;
};

}  // namespace mip
