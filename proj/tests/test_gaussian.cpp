#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mip/gaussian.hpp"
#include "mip/rng.hpp"
#include "support/reference_impls.hpp"

using mip::GaussianSystem;
using mip::Rng;
using mip::Subset;

namespace {

/** Deterministic well-conditioned SPD matrix. */
Eigen::MatrixXd random_spd(int n, std::uint64_t seed, double ridge = 0.1) {
    Rng rng(seed);
    Eigen::MatrixXd a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
    Eigen::MatrixXd s = a.transpose() * a / n;
    s.diagonal().array() += ridge;
    return s;
}

}  // namespace

TEST_CASE("logdet_psd matches cofactor determinants on random SPD matrices") {
    for (int n = 1; n <= 6; ++n) {
        Eigen::MatrixXd s = random_spd(n, 100 + n);
        double expect = std::log2(refimpl::det_cofactor(s));
        CHECK_THAT(mip::logdet_psd(s), Catch::Matchers::WithinAbs(expect, 1e-9));
    }
}

TEST_CASE("logdet_psd: identity has zero log-determinant and needs no jitter") {
    double jitter = -1.0;
    CHECK(mip::logdet_psd(Eigen::MatrixXd::Identity(4, 4), {}, &jitter) == 0.0);
    CHECK(jitter == 0.0);
}

TEST_CASE("logdet_psd rejects asymmetric input, fails cleanly on hopeless input") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(mip::logdet_psd(bad), mip::invalid_input);
    // an all-zero matrix is degenerate but repairable: the smallest jitter
    // step already makes it positive definite
    double jitter = 0.0;
    double zero_logdet = mip::logdet_psd(Eigen::MatrixXd::Zero(3, 3), {}, &jitter);
    CHECK(jitter > 0.0);
    CHECK(std::isfinite(zero_logdet));
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(mip::logdet_psd(indefinite), mip::numeric_error);
}

TEST_CASE("bivariate loss at correlation 1/2 is -log2(3/4)") {
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.5, 0.5, 1.0;
    GaussianSystem sys = GaussianSystem::from_covariance(sigma);
    const double expect = -std::log2(0.75);  // = log2 sig11 + log2 sig22 - log2 det
    CHECK_THAT(sys.mutual_information(Subset::of(2, {0})), Catch::Matchers::WithinAbs(expect, 1e-12));
    CHECK_THAT(sys.mutual_information(Subset::of(2, {1})), Catch::Matchers::WithinAbs(expect, 1e-12));
    CHECK(expect == Catch::Approx(0.4150374992788438).epsilon(1e-12));
}

TEST_CASE("sampled estimate converges to the closed form") {
    // Draw correlated pairs (x, x*rho + sqrt(1-rho^2)*y) and compare the
    // sampled-covariance loss against the population value.
    const double rho = 0.5;
    Rng rng(2024);
    const int t = 1000000;
    Eigen::MatrixXd data(t, 2);
    for (int i = 0; i < t; ++i) {
        double x = rng.normal(), y = rng.normal();
        data(i, 0) = x;
        data(i, 1) = rho * x + std::sqrt(1 - rho * rho) * y;
    }
    GaussianSystem sys = GaussianSystem::from_samples(data);
    CHECK_THAT(sys.mutual_information(Subset::of(2, {0})),
               Catch::Matchers::WithinAbs(-std::log2(0.75), 0.01));
}

TEST_CASE("sample covariance uses the unbiased divisor") {
    Eigen::MatrixXd data(2, 2);
    data << 0.0, 0.0, 2.0, 2.0;
    Eigen::MatrixXd cov = mip::sample_covariance(data);
    Eigen::MatrixXd expect(2, 2);
    expect << 2.0, 2.0, 2.0, 2.0;
    CHECK((cov - expect).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(mip::sample_covariance(data.topRows(1)), mip::invalid_input);
}

TEST_CASE("a constant column engages the jitter ladder instead of failing") {
    Rng rng(77);
    Eigen::MatrixXd data(500, 3);
    for (int i = 0; i < 500; ++i) {
        data(i, 0) = rng.normal();
        data(i, 1) = rng.normal();
        data(i, 2) = 3.25;  // constant -> zero covariance row/column
    }
    GaussianSystem sys = GaussianSystem::from_samples(data);
    CHECK(sys.jitter() > 0.0);
    CHECK(std::isfinite(sys.loss(Subset::of(3, {2}))));
}

TEST_CASE("construction validates symmetry and shape") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.8, -0.8, 1.0;
    CHECK_THROWS_AS(GaussianSystem::from_covariance(bad), mip::invalid_input);
    CHECK_THROWS_AS(GaussianSystem::from_covariance(Eigen::MatrixXd::Zero(2, 3)),
                    mip::invalid_input);
}

TEST_CASE("subset domain errors") {
    GaussianSystem sys = GaussianSystem::from_covariance(random_spd(4, 9));
    CHECK_THROWS_AS(sys.entropy(Subset(4)), mip::invalid_input);
    CHECK_THROWS_AS(sys.mutual_information(Subset(4)), mip::invalid_input);
    CHECK_THROWS_AS(sys.mutual_information(Subset::full(4)), mip::invalid_input);
    CHECK_THROWS_AS(sys.entropy(Subset::of(5, {0})), mip::invalid_input);
    CHECK(sys.loss(Subset(4)) == 0.0);
    CHECK(sys.loss(Subset::full(4)) == 0.0);
}

TEST_CASE("entropy and loss match cofactor references on random systems") {
    Eigen::MatrixXd s = random_spd(6, 41);
    GaussianSystem sys = GaussianSystem::from_covariance(s);
    for (std::uint32_t mask = 1; mask < (1u << 6) - 1; ++mask) {
        std::vector<int> idx = refimpl::mask_to_indices(mask, 6);
        Subset sub(6);
        for (int i : idx) sub.add(i);
        CHECK_THAT(sys.entropy(sub),
                   Catch::Matchers::WithinAbs(refimpl::logdet2_cofactor(s, idx), 1e-9));
        CHECK_THAT(sys.loss(sub), Catch::Matchers::WithinAbs(refimpl::loss_cofactor(s, mask), 1e-9));
    }
}

TEST_CASE("marginal keeps the selected covariance block") {
    Eigen::MatrixXd s = random_spd(5, 55);
    GaussianSystem sys = GaussianSystem::from_covariance(s);
    GaussianSystem sub = sys.marginal(Subset::of(5, {1, 3, 4}));
    REQUIRE(sub.size() == 3);
    std::vector<int> idx{1, 3, 4};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK_THAT(sub.covariance()(i, j), Catch::Matchers::WithinAbs(s(idx[i], idx[j]), 1e-12));
    CHECK_THROWS_AS(sys.marginal(Subset(5)), mip::invalid_input);
}

TEST_CASE("precision-matrix identity: complement entropy equals full plus precision minor") {
    // log2|Sigma_{V-S}| = log2|Sigma_V| + log2|Lambda_S| with Lambda the
    // inverse covariance; the right-hand side is evaluated with cofactor
    // determinants on an independently inverted matrix.
    Eigen::MatrixXd s = random_spd(6, 4242);
    GaussianSystem sys = GaussianSystem::from_covariance(s);
    Eigen::MatrixXd lambda = s.inverse();
    for (std::uint32_t mask = 1; mask < (1u << 6) - 1; ++mask) {
        std::vector<int> idx = refimpl::mask_to_indices(mask, 6);
        Subset sub(6);
        for (int i : idx) sub.add(i);
        double lhs = sys.entropy(sub.complement());
        double rhs = sys.logdet_full() + refimpl::logdet2_cofactor(lambda, idx);
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-8));
    }
}

TEST_CASE("entropy chain: H(B) = H(A) + log2 det of the Schur complement") {
    Eigen::MatrixXd s = random_spd(5, 7);
    GaussianSystem sys = GaussianSystem::from_covariance(s);
    // A = {0,2} inside B = {0,1,2,4}
    Subset a = Subset::of(5, {0, 2});
    Subset b = Subset::of(5, {0, 1, 2, 4});
    Eigen::MatrixXd sigma_b = refimpl::submatrix(s, {0, 1, 2, 4});
    // positions of A inside B: 0,2 ; of B-A: 1,3
    Eigen::MatrixXd saa = refimpl::submatrix(sigma_b, {0, 2});
    Eigen::MatrixXd scc = refimpl::submatrix(sigma_b, {1, 3});
    Eigen::MatrixXd sca(2, 2), sac(2, 2);
    sca << sigma_b(1, 0), sigma_b(1, 2), sigma_b(3, 0), sigma_b(3, 2);
    sac = sca.transpose();
    Eigen::MatrixXd schur = scc - sca * saa.inverse() * sac;
    double expect = sys.entropy(a) + std::log2(refimpl::det_cofactor(schur));
    CHECK_THAT(sys.entropy(b), Catch::Matchers::WithinAbs(expect, 1e-9));
}

TEST_CASE("evaluations are stable across interleaved subset sizes") {
    // The scratch buffer is reused between calls of different sizes; make
    // sure values do not depend on evaluation order.
    Eigen::MatrixXd s = random_spd(6, 8);
    GaussianSystem sys = GaussianSystem::from_covariance(s);
    Subset small = Subset::of(6, {2});
    Subset big = Subset::of(6, {0, 1, 3, 4, 5});
    double first = sys.loss(small);
    double mid = sys.loss(big);
    CHECK(sys.loss(small) == first);
    CHECK(sys.loss(big) == mid);
}
