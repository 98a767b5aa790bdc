#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mip/sweeps.hpp"

using mip::BenchRow;
using mip::CmlParams;

TEST_CASE("least-squares line fit is exact on exact data") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v - 2.0);
    mip::LineFit f = mip::fit_line(x, y);
    CHECK_THAT(f.slope, Catch::Matchers::WithinAbs(3.0, 1e-12));
    CHECK_THAT(f.intercept, Catch::Matchers::WithinAbs(-2.0, 1e-12));

    std::vector<double> short_x{1.0};
    CHECK_THROWS_AS(mip::fit_line(short_x, short_x), mip::invalid_input);
    std::vector<double> mismatched{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(mip::fit_line(x, mismatched), mip::invalid_input);
}

TEST_CASE("scaling fits recover known exponents from synthetic timings") {
    std::vector<BenchRow> cubic;
    for (int n : {50, 100, 200, 400}) {
        BenchRow r;
        r.n = n;
        r.seconds = 7e-9 * std::pow(n, 3.0);
        cubic.push_back(r);
    }
    CHECK_THAT(mip::loglog_fit(cubic).slope, Catch::Matchers::WithinAbs(3.0, 1e-9));

    std::vector<BenchRow> exponential;
    for (int n : {10, 11, 12, 13, 14}) {
        BenchRow r;
        r.n = n;
        r.seconds = 1e-6 * std::pow(2.0, n);
        exponential.push_back(r);
    }
    CHECK_THAT(mip::semilog_fit(exponential).slope, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("bench rows carry sane timings and call counts") {
    BenchRow q = mip::bench_one(mip::BenchAlgo::queyranne, 8, 200, 7);
    CHECK(q.algo == "queyranne");
    CHECK(q.n == 8);
    CHECK(q.seconds >= 0.0);
    CHECK(std::isfinite(q.seconds));
    CHECK(q.calls > 0);
    CHECK(q.calls <= 8ull * 8ull * 8ull);

    BenchRow e = mip::bench_one(mip::BenchAlgo::exhaustive, 6, 200, 7);
    CHECK(e.algo == "exhaustive");
    CHECK(e.calls == 31);  // 2^(6-1) - 1 sides
    CHECK(std::isfinite(e.seconds));
}

TEST_CASE("block recovery study finds the planted blocks") {
    mip::BlockCorrelatedParams p;
    p.block_size = 5;
    p.n_blocks = 2;
    p.samples = 1500;
    p.lambda = 0.2;
    mip::BlockRecoveryResult r = mip::block_recovery_study(p, 3, 21);
    CHECK(r.runs == 3);
    CHECK(r.recovered == 3);
    CHECK_THROWS_AS(mip::block_recovery_study(p, 0, 21), mip::invalid_input);
}

TEST_CASE("retry helper re-seeds through an escaping trajectory") {
    CmlParams p;
    p.delta = 0.0;
    p.t_total = 3000;
    p.t_transient = 0;
    int divergent = 0;
    Eigen::MatrixXd m = mip::simulate_cml_with_retries(p, 2, 50, divergent);
    CHECK(m.rows() == 3000);
    CHECK(m.cols() == 30);
    CHECK(divergent == 1);  // the first attempt for this run seed escapes

    int d2 = 0;
    CHECK_THROWS_WITH(mip::simulate_cml_with_retries(p, 2, 0, d2),
                      Catch::Matchers::ContainsSubstring("re-seeds"));
    CHECK(d2 == 1);
}

TEST_CASE("lattice sweep produces consistent per-delta summaries") {
    mip::CmlSweepConfig cfg;
    cfg.base.n = 8;
    cfg.base.weak_link_site = 3;
    cfg.base.t_total = 500;
    cfg.base.t_transient = 100;
    cfg.deltas = {0.0, 0.5};
    cfg.runs = 2;
    cfg.seed = 9;
    std::vector<mip::CmlSweepPoint> pts = mip::cml_partition_sweep(cfg);
    REQUIRE(pts.size() == 2);
    for (const mip::CmlSweepPoint& pt : pts) {
        CHECK(pt.runs == 2);
        CHECK(pt.recovered >= 0);
        CHECK(pt.recovered <= 2);
        CHECK(pt.divergent >= 0);
        CHECK(pt.p_hat == pt.recovered / 2.0);
    }
    CHECK(pts[0].delta == 0.0);
    CHECK(pts[1].delta == 0.5);

    // the whole sweep is deterministic
    std::vector<mip::CmlSweepPoint> again = mip::cml_partition_sweep(cfg);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(again[i].recovered == pts[i].recovered);
        CHECK(again[i].divergent == pts[i].divergent);
    }

    cfg.runs = 0;
    CHECK_THROWS_AS(mip::cml_partition_sweep(cfg), mip::invalid_input);
}
