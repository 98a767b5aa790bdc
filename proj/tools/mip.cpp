// mip — exact minimum information partition search over multivariate systems.
//
// Subcommands: bipartition, kpartition, bench, cml-sweep, check, gen.
// Exit codes: 0 success, 2 invalid input, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mip/mip.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1234;

#ifdef MIP_VERSION
constexpr const char* kVersion = MIP_VERSION;
#else
constexpr const char* kVersion = "0.0.0";
#endif

struct LoadedSystem {
    mip::GaussianSystem sys;
    std::vector<std::string> labels;
    nlohmann::json provenance;
};

/** Load a system from CSV.  kind = "samples" (rows are observations) or
 *  "covariance" (square matrix).  A header row, when present, provides
 *  labels unless --labels overrides them. */
LoadedSystem load_system(const std::string& path, const std::string& kind,
                         const std::string& labels_csv) {
    mip::CsvTable t = mip::read_csv_file(path);
    std::vector<std::string> labels = t.header;
    if (!labels_csv.empty()) {
        labels = mip::detail::split_comma(labels_csv);
    }
    int n = static_cast<int>(t.values.cols());
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw mip::invalid_input("label count does not match the number of variables");

    nlohmann::json prov{{"path", path}, {"kind", kind}};
    if (kind == "covariance") {
        if (t.values.rows() != t.values.cols())
            throw mip::invalid_input("covariance input must be a square matrix");
        return {mip::GaussianSystem::from_covariance(t.values), std::move(labels), std::move(prov)};
    }
    if (kind != "samples") throw mip::invalid_input("input kind must be samples or covariance");
    return {mip::GaussianSystem::from_samples(t.values), std::move(labels), std::move(prov)};
}

std::string side_to_text(const mip::Subset& s, const std::vector<std::string>& labels) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    s.for_each([&](int i) {
        if (!first) out << ",";
        if (labels.empty())
            out << (i + 1);
        else
            out << labels[i];
        first = false;
    });
    out << "}";
    return out.str();
}

void write_report(const mip::RunReport& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw mip::invalid_input("cannot open file for writing: " + path);
    out << report.to_json().dump(2) << "\n";
}

mip::RunReport base_report(const LoadedSystem& loaded, const std::string& algorithm,
                           std::uint64_t seed) {
    mip::RunReport r;
    r.version = kVersion;
    r.algorithm = algorithm;
    r.input = loaded.provenance;
    r.seed = seed;
    r.n = loaded.sys.size();
    r.labels = loaded.labels;
    r.jitter = loaded.sys.jitter();
    return r;
}

int run_bipartition(const std::string& input, const std::string& kind, const std::string& labels,
                    bool no_fast, std::uint64_t seed, const std::string& out_path) {
    LoadedSystem loaded = load_system(input, kind, labels);
    mip::GaussianSearchOptions opts;
    opts.fast_path = !no_fast;
    mip::BipartitionResult r = mip::minimize_bipartition(loaded.sys, opts);

    mip::RunReport report = base_report(loaded, "queyranne", seed);
    report.blocks = {mip::one_based(r.best), mip::one_based(r.best.complement())};
    report.loss_bits = r.loss;
    report.oracle_calls = r.oracle_calls;
    report.wall_time_seconds = r.wall_time_seconds;
    write_report(report, out_path);

    std::cout << "n: " << loaded.sys.size() << "\n";
    std::cout << "minimum cut: " << side_to_text(r.best, loaded.labels) << " | "
              << side_to_text(r.best.complement(), loaded.labels) << "\n";
    std::cout.precision(12);
    std::cout << "loss_bits: " << r.loss << "\n";
    std::cout << "oracle_calls: " << r.oracle_calls << "\n";
    return 0;
}

int run_kpartition(const std::string& input, const std::string& kind, const std::string& labels,
                   int k, std::uint64_t seed, const std::string& out_path) {
    LoadedSystem loaded = load_system(input, kind, labels);
    mip::KPartition r = mip::minimize_kpartition(loaded.sys, k);

    mip::RunReport report = base_report(loaded, "kpartition", seed);
    for (const mip::Subset& b : r.blocks) report.blocks.push_back(mip::one_based(b));
    report.loss_bits = r.loss;
    report.oracle_calls = r.oracle_calls;
    report.wall_time_seconds = r.wall_time_seconds;
    write_report(report, out_path);

    std::cout << "n: " << loaded.sys.size() << "\nk: " << k << "\n";
    for (std::size_t i = 0; i < r.blocks.size(); ++i)
        std::cout << "block " << (i + 1) << ": " << side_to_text(r.blocks[i], loaded.labels) << "\n";
    std::cout.precision(12);
    std::cout << "loss_bits: " << r.loss << "\n";
    std::cout << "oracle_calls: " << r.oracle_calls << "\n";
    return 0;
}

int run_bench(const std::string& algos_csv, int min_n, int max_n, int exh_min_n, int exh_max_n,
              int samples, int reps, std::uint64_t seed, const std::string& out_path) {
    std::vector<mip::BenchRow> rows;
    bool want_q = algos_csv.find("queyranne") != std::string::npos;
    bool want_e = algos_csv.find("exhaustive") != std::string::npos;
    if (!want_q && !want_e)
        throw mip::invalid_input("--algos must name queyranne and/or exhaustive");

    if (want_q) {
        for (int n = min_n; n <= max_n; n *= 2) {
            rows.push_back(mip::bench_one(mip::BenchAlgo::queyranne, n, samples, seed, reps));
            std::cerr << "queyranne n=" << n << " " << rows.back().seconds << " s\n";
        }
    }
    if (want_e) {
        for (int n = exh_min_n; n <= exh_max_n; ++n) {
            rows.push_back(mip::bench_one(mip::BenchAlgo::exhaustive, n, samples, seed, reps));
            std::cerr << "exhaustive n=" << n << " " << rows.back().seconds << " s\n";
        }
    }

    std::ostringstream csv;
    csv << "algo,n,seconds,calls\n";
    for (const mip::BenchRow& r : rows)
        csv << r.algo << "," << r.n << "," << mip::format_double(r.seconds) << "," << r.calls
            << "\n";
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw mip::invalid_input("cannot open file for writing: " + out_path);
        out << csv.str();
    }

    auto subset = [&rows](const char* name) {
        std::vector<mip::BenchRow> s;
        for (const mip::BenchRow& r : rows)
            if (r.algo == name) s.push_back(r);
        return s;
    };
    if (want_q) {
        std::vector<mip::BenchRow> q = subset("queyranne");
        if (q.size() >= 2)
            std::cerr << "queyranne log-log slope: " << mip::loglog_fit(q).slope << "\n";
    }
    if (want_e) {
        std::vector<mip::BenchRow> e = subset("exhaustive");
        if (e.size() >= 2)
            std::cerr << "exhaustive semi-log slope: " << mip::semilog_fit(e).slope << "\n";
    }
    return 0;
}

int run_cml_sweep(const std::string& deltas_csv, int runs, int n, double a, double eps,
                  int t_total, int t_transient, int weak_link_1based, std::uint64_t seed,
                  int max_retries, int threads, const std::string& out_path) {
    mip::CmlSweepConfig cfg;
    cfg.base.n = n;
    cfg.base.a = a;
    cfg.base.eps = eps;
    cfg.base.t_total = t_total;
    cfg.base.t_transient = t_transient;
    cfg.base.weak_link_site = weak_link_1based - 1;
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.max_retries = max_retries;
    cfg.threads = threads;
    if (!deltas_csv.empty()) {
        cfg.deltas.clear();
        for (const std::string& tok : mip::detail::split_comma(deltas_csv)) {
            double v;
            if (!mip::detail::parse_double(tok, v))
                throw mip::invalid_input("bad delta value: " + tok);
            cfg.deltas.push_back(v);
        }
    }

    std::vector<mip::CmlSweepPoint> points = mip::cml_partition_sweep(cfg);

    std::ostringstream csv;
    csv << "delta,runs,recovered,divergent,p_hat\n";
    for (const mip::CmlSweepPoint& p : points) {
        csv << mip::format_double(p.delta) << "," << p.runs << "," << p.recovered << ","
            << p.divergent << "," << mip::format_double(p.p_hat) << "\n";
        std::cerr << "delta=" << p.delta << " p_hat=" << p.p_hat << " divergent=" << p.divergent
                  << "\n";
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw mip::invalid_input("cannot open file for writing: " + out_path);
        out << csv.str();
    }
    return 0;
}

int run_check(const std::string& property, const std::string& input, const std::string& kind,
              int trials, double tol, std::uint64_t seed) {
    LoadedSystem loaded = load_system(input, kind, "");
    const mip::GaussianSystem& sys = loaded.sys;
    mip::CachingOracle oracle([&sys](const mip::Subset& s) { return sys.loss(s); });
    const int n = sys.size();

    mip::PropertyReport report;
    if (property == "submodular") {
        report = mip::check_submodular(oracle, n, trials, tol, seed);
    } else if (property == "symmetric") {
        report = mip::check_symmetric(oracle, n, trials, tol, seed);
    } else if (property == "diminishing") {
        report = mip::check_diminishing_returns(oracle, n, trials, tol, seed);
    } else {
        throw mip::invalid_input("property must be submodular, symmetric, or diminishing");
    }

    std::cout << "property: " << property << "\n";
    std::cout << "trials: " << report.trials << "\n";
    std::cout << "violations: " << report.violations.size() << "\n";
    std::cout.precision(6);
    std::cout << "worst_margin: " << report.worst_margin << "\n";
    std::cout << "result: " << (report.ok() ? "ok" : "violated") << "\n";
    for (std::size_t i = 0; i < report.violations.size() && i < 5; ++i) {
        const mip::PropertyViolation& v = report.violations[i];
        std::cout << "  violation " << v.x.to_string() << " / " << v.y.to_string() << " margin "
                  << v.margin << "\n";
    }
    return 0;
}

int run_gen(const std::string& what, int n, int samples, int block_size, int n_blocks,
            double lambda, double a, double eps, double delta, int t_total, int t_transient,
            int weak_link_1based, std::uint64_t seed, const std::string& out_path) {
    Eigen::MatrixXd data;
    if (what == "gaussian") {
        data = mip::gen_gaussian_samples(n, samples, seed);
    } else if (what == "blocks") {
        mip::BlockCorrelatedParams p;
        p.block_size = block_size;
        p.n_blocks = n_blocks;
        p.samples = samples;
        p.lambda = lambda;
        p.seed = seed;
        data = mip::gen_block_correlated(p);
    } else if (what == "cml") {
        mip::CmlParams p;
        p.n = n;
        p.a = a;
        p.eps = eps;
        p.delta = delta;
        p.t_total = t_total;
        p.t_transient = t_transient;
        p.weak_link_site = weak_link_1based - 1;
        p.seed = seed;
        data = mip::simulate_cml(p);
    } else {
        throw mip::invalid_input("generator must be gaussian, blocks, or cml");
    }

    if (out_path.empty()) {
        mip::write_csv(std::cout, data);
    } else {
        mip::write_csv_file(out_path, data);
        std::cerr << "wrote " << data.rows() << "x" << data.cols() << " samples to " << out_path
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact minimum information partition search"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string input, kind = "samples", labels, out_path;
    std::uint64_t seed = kDefaultSeed;
    bool no_fast = false;
    int k = 2;

    CLI::App* bi = app.add_subcommand("bipartition", "Minimum-loss bipartition of a system");
    bi->add_option("--input", input, "CSV file")->required();
    bi->add_option("--input-kind", kind, "samples (default) or covariance");
    bi->add_option("--labels", labels, "comma-separated display labels");
    bi->add_flag("--no-fast", no_fast, "use the plain refactorizing evaluation path");
    bi->add_option("--seed", seed, "seed recorded in the report");
    bi->add_option("--out", out_path, "write a JSON report here");

    CLI::App* kp = app.add_subcommand("kpartition", "Minimum-loss k-partition of a system");
    kp->add_option("--input", input, "CSV file")->required();
    kp->add_option("--input-kind", kind, "samples (default) or covariance");
    kp->add_option("--labels", labels, "comma-separated display labels");
    kp->add_option("--k", k, "number of blocks (2..n)")->required();
    kp->add_option("--seed", seed, "seed recorded in the report");
    kp->add_option("--out", out_path, "write a JSON report here");

    std::string algos = "queyranne,exhaustive";
    int min_n = 50, max_n = 400, exh_min_n = 10, exh_max_n = 16, samples = 10000, reps = 3;
    CLI::App* be = app.add_subcommand("bench", "Timing sweeps with scaling fits (search only)");
    be->add_option("--algos", algos, "comma list: queyranne,exhaustive");
    be->add_option("--min-n", min_n, "smallest n for queyranne (doubling grid)");
    be->add_option("--max-n", max_n, "largest n for queyranne");
    be->add_option("--exh-min-n", exh_min_n, "smallest n for exhaustive (step 1)");
    be->add_option("--exh-max-n", exh_max_n, "largest n for exhaustive");
    be->add_option("--samples", samples, "observations per generated system");
    be->add_option("--reps", reps, "repetitions per cell (fastest kept)");
    be->add_option("--seed", seed, "generator seed");
    be->add_option("--out", out_path, "write rows CSV here (default stdout)");

    std::string deltas;
    int runs = 50, cml_n = 30, t_total = 10000, t_transient = 1000, weak_link = 20;
    int max_retries = 50, threads = 0;
    double a = 1.8950, eps = 0.1;
    CLI::App* cs = app.add_subcommand("cml-sweep",
                                      "Lattice sweep: weak-link recovery rate vs delta");
    cs->add_option("--deltas", deltas, "comma list (default 0,0.125,0.25,0.375,0.5)");
    cs->add_option("--runs", runs, "simulations per delta");
    cs->add_option("--n", cml_n, "lattice sites");
    cs->add_option("--a", a, "map parameter");
    cs->add_option("--eps", eps, "coupling strength");
    cs->add_option("--t-total", t_total, "retained steps");
    cs->add_option("--t-transient", t_transient, "discarded steps");
    cs->add_option("--weak-link", weak_link, "1-based site left of the weakened link");
    cs->add_option("--seed", seed, "sweep seed");
    cs->add_option("--max-retries", max_retries, "re-seeds allowed per escaped run");
    cs->add_option("--threads", threads, "worker threads (0 = MIP_THREADS or hardware)");
    cs->add_option("--out", out_path, "write points CSV here (default stdout)");

    std::string property;
    int trials = 10000;
    double tol = 1e-9;
    CLI::App* ck = app.add_subcommand("check", "Property checks on a system's loss function");
    ck->add_option("--property", property, "submodular | symmetric | diminishing")->required();
    ck->add_option("--input", input, "CSV file")->required();
    ck->add_option("--input-kind", kind, "samples (default) or covariance");
    ck->add_option("--trials", trials, "random trials");
    ck->add_option("--tol", tol, "tolerance");
    ck->add_option("--seed", seed, "trial seed");

    std::string what;
    int gen_n = 10, gen_samples = 1000, block_size = 20, n_blocks = 2;
    double lambda = 0.1, delta = 0.5;
    CLI::App* ge = app.add_subcommand("gen", "Generate sample data as CSV");
    ge->add_option("what", what, "gaussian | blocks | cml")->required();
    ge->add_option("--n", gen_n, "variables (gaussian) or sites (cml)");
    ge->add_option("--samples", gen_samples, "observations (gaussian/blocks)");
    ge->add_option("--block-size", block_size, "variables per block (blocks)");
    ge->add_option("--n-blocks", n_blocks, "number of blocks (blocks)");
    ge->add_option("--lambda", lambda, "common-component share (blocks)");
    ge->add_option("--a", a, "map parameter (cml)");
    ge->add_option("--eps", eps, "coupling strength (cml)");
    ge->add_option("--delta", delta, "weak-link strength (cml)");
    ge->add_option("--t-total", t_total, "retained steps (cml)");
    ge->add_option("--t-transient", t_transient, "discarded steps (cml)");
    ge->add_option("--weak-link", weak_link, "1-based site left of the weakened link (cml)");
    ge->add_option("--seed", seed, "generator seed");
    ge->add_option("--out", out_path, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
        if (*bi) return run_bipartition(input, kind, labels, no_fast, seed, out_path);
        if (*kp) return run_kpartition(input, kind, labels, k, seed, out_path);
        if (*be)
            return run_bench(algos, min_n, max_n, exh_min_n, exh_max_n, samples, reps, seed,
                             out_path);
        if (*cs)
            return run_cml_sweep(deltas, runs, cml_n, a, eps, t_total, t_transient, weak_link,
                                 seed, max_retries, threads, out_path);
        if (*ck) return run_check(property, input, kind, trials, tol, seed);
        if (*ge)
            return run_gen(what, gen_n, gen_samples, block_size, n_blocks, lambda, a, eps, delta,
                           t_total, t_transient, weak_link, seed, out_path);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const mip::invalid_input& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const mip::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
