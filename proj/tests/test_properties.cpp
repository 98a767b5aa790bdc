#include <catch2/catch_amalgamated.hpp>

#include "mip/gaussian.hpp"
#include "mip/oracle.hpp"
#include "mip/properties.hpp"
#include "mip/rng.hpp"

using mip::CachingOracle;
using mip::GaussianSystem;
using mip::Rng;
using mip::Subset;

namespace {

GaussianSystem correlated_system(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
    Eigen::MatrixXd s = a.transpose() * a / n;
    s.diagonal().array() += 0.2;
    return GaussianSystem::from_covariance(s);
}

}  // namespace

TEST_CASE("random_subset covers the lattice") {
    Rng rng(3);
    int seen_empty = 0, seen_full = 0;
    for (int i = 0; i < 200; ++i) {
        Subset s = mip::random_subset(rng, 3);
        if (s.empty()) ++seen_empty;
        if (s.is_full()) ++seen_full;
    }
    CHECK(seen_empty > 0);  // each has probability 1/8 per draw
    CHECK(seen_full > 0);
}

TEST_CASE("gaussian loss is submodular and symmetric within tolerance") {
    GaussianSystem sys = correlated_system(8, 11);
    CachingOracle oracle([&sys](const Subset& s) { return sys.loss(s); });

    auto sub = mip::check_submodular(oracle, 8, 3000, 1e-9, 5);
    CHECK(sub.ok());
    CHECK(sub.trials == 3000);
    CHECK(sub.worst_margin >= -1e-9);

    auto sym = mip::check_symmetric(oracle, 8, 3000, 1e-9, 6);
    CHECK(sym.ok());

    auto dim = mip::check_diminishing_returns(oracle, 8, 3000, 1e-9, 7);
    CHECK(dim.ok());
}

TEST_CASE("the entropy itself is not symmetric, and the checker can tell") {
    GaussianSystem sys = correlated_system(5, 21);
    // extend H by H(empty) = 0 so the checker can evaluate anything
    CachingOracle oracle([&sys](const Subset& s) {
        return s.empty() ? 0.0 : sys.entropy(s);
    });
    auto sym = mip::check_symmetric(oracle, 5, 2000, 1e-9, 8);
    CHECK_FALSE(sym.ok());
    // direct confirmation on one subset
    double h0 = sys.entropy(Subset::of(5, {0}));
    double hrest = sys.entropy(Subset::of(5, {1, 2, 3, 4}));
    CHECK(std::abs(h0 - hrest) > 1e-6);
}

TEST_CASE("entropy has diminishing returns (it is submodular too)") {
    GaussianSystem sys = correlated_system(7, 31);
    CachingOracle oracle([&sys](const Subset& s) {
        return s.empty() ? 0.0 : sys.entropy(s);
    });
    auto dim = mip::check_diminishing_returns(oracle, 7, 3000, 1e-9, 9);
    CHECK(dim.ok());
    CHECK(dim.trials == 3000);
}

TEST_CASE("a non-submodular function is flagged with its witness pair") {
    // f(S) = |S|^2 is strictly supermodular: the submodularity slack works
    // out to -2(|X|-|X&Y|)(|Y|-|X&Y|), negative whenever X and Y overlap
    // partially, so violations abound.
    CachingOracle oracle([](const Subset& s) {
        double c = static_cast<double>(s.count());
        return c * c;
    });
    auto rep = mip::check_submodular(oracle, 6, 500, 1e-9, 10);
    CHECK_FALSE(rep.ok());
    REQUIRE_FALSE(rep.violations.empty());
    const auto& v = rep.violations.front();
    // recompute the reported margin from the witness
    auto f = [](const Subset& s) {
        double c = static_cast<double>(s.count());
        return c * c;
    };
    double slack = f(v.x) + f(v.y) - f(v.x | v.y) - f(v.x & v.y);
    CHECK(slack == v.margin);
    CHECK(slack < -1e-9);
    CHECK(rep.worst_margin <= slack);
}

TEST_CASE("checkers are deterministic given the seed") {
    GaussianSystem sys = correlated_system(6, 77);
    CachingOracle a([&sys](const Subset& s) { return sys.loss(s); });
    CachingOracle b([&sys](const Subset& s) { return sys.loss(s); });
    auto r1 = mip::check_submodular(a, 6, 200, 1e-9, 42);
    auto r2 = mip::check_submodular(b, 6, 200, 1e-9, 42);
    CHECK(r1.worst_margin == r2.worst_margin);
    CHECK(r1.violations.size() == r2.violations.size());
}
