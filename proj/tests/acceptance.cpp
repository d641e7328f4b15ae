#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include "fixtures.hpp"
#include "gld/blocks_score.hpp"
#include "gld/cd_engine.hpp"
#include "gld/evalbench.hpp"
#include "gld/mcd_core.hpp"
#include "gld/mcit.hpp"
#include "oracles.hpp"

using namespace gld;
namespace fs = std::filesystem;

#ifndef GLD_CLI_PATH
#define GLD_CLI_PATH "gld"
#endif

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// one-sided: is the observed count consistent with rate <= p at the given confidence
bool rate_not_above(int hits, int trials, double p, double confidence) {
    if (hits == 0) return true;
    boost::math::binomial_distribution<double> bin(trials, p);
    const double tail = boost::math::cdf(boost::math::complement(bin, hits - 1));
    return tail >= 1.0 - confidence;
}

void criterion1() {
    std::mt19937_64 rng(2024);
    const auto t0 = std::chrono::steady_clock::now();
    int exact = 0;
    const int models = 200;
    for (int t = 0; t < models; ++t) {
        const int n = 4 + t % 3;
        auto g = oracle::random_dag(n, 0.5, rng);
        auto e = g.edges();
        std::shuffle(e.begin(), e.end(), rng);
        std::vector<std::pair<int, int>> changing(e.begin(), e.begin() + std::min<std::size_t>(e.size(), t % 3));
        MarkedOracle o(g, changing);
        auto r = run_mcd([&](const MultiIndex& q) { return o(q); },
                         [&](const std::vector<MultiIndex>& lhs, const MultiIndex& rhs) { return o.implies(lhs, rhs); }, n);
        std::set<Pdag> truth;
        for (unsigned s = 0; s < (1u << changing.size()); ++s) {
            Dag h(n);
            for (auto [a, b] : e) {
                auto it = std::find(changing.begin(), changing.end(), std::make_pair(a, b));
                if (it == changing.end() || (s >> (it - changing.begin()) & 1u)) h.add_edge(a, b);
            }
            truth.insert(oracle::cpdag_by_orientations(h));
        }
        std::set<Pdag> got(r.raw_state_graphs.begin(), r.raw_state_graphs.end());
        exact += r.converged && got == truth;
    }
    const double dt = seconds_since(t0);
    report(1, exact == models && dt < 60.0, "oracle MCD soundness", fmt("%d/%d exact, %.1f s", exact, models, dt));
}

void criterion2() {
    auto cit = [](const Dag& g) { return [&g](const MultiIndex& q) { return oracle::dsep_paths(g, q); }; };
    int total = 0, ok = 0;
    for (int n = 1; n <= 4; ++n)
        for (const auto& g : oracle::all_dags(n)) {
            ++total;
            ok += run_cd(cit(g), n).graph == oracle::cpdag_by_orientations(g);
        }
    std::mt19937_64 rng(31);
    for (int t = 0; t < 500; ++t) {
        const int n = 6 + t % 3;
        auto g = oracle::random_dag(n, 0.3, rng);
        ++total;
        ok += run_cd(cit(g), n).graph == oracle::cpdag_by_orientations(g);
    }
    report(2, ok == total, "CD engine oracle consistency", fmt("%d/%d", ok, total));
}

void criterion3() {
    const int trials = 5000;
    const std::size_t n = 10000;
    int rej05 = 0, rej01 = 0;
    auto h05 = hyperparams(n, 0, HyperConfig{});
    HyperConfig c01;
    c01.alpha = 0.01;
    auto h01 = hyperparams(n, 0, c01);
    for (int t = 0; t < trials; ++t) {
        auto d = fixture::correlated_pair(n, fixture::constant(0.2 * (t % 4)), 500000 + t);
        auto q = MultiIndex::make(0, 1);
        auto s = score_series(d, q, h05.hom_B);
        rej05 += homogeneity_test(s, h05).reject;
        if (h01.hom_B != h05.hom_B) s = score_series(d, q, h01.hom_B);
        rej01 += homogeneity_test(s, h01).reject;
    }
    const bool ok = rate_not_above(rej05, trials, 0.05, 0.99) && rate_not_above(rej01, trials, 0.01, 0.99);
    report(3, ok, "homogeneity false-positive rate",
           fmt("alpha=0.05: %.4f, alpha=0.01: %.4f over %d trials", double(rej05) / trials, double(rej01) / trials, trials));
}

void criterion4() {
    double worst = 0.0;
    for (int theta = 1; theta <= 12; ++theta)
        for (double beta : {0.01, 0.05, 0.1, 0.25, 0.5, 0.8})
            for (int k = 0; k <= theta + 1; ++k) {
                double ref = 0.0;
                for (unsigned mask = 0; mask < (1u << theta); ++mask) {
                    const int ones = std::popcount(mask);
                    if (ones >= k) ref += std::pow(beta, ones) * std::pow(1.0 - beta, theta - ones);
                }
                worst = std::max(worst, std::abs(homogeneity_p_value(theta, beta, k) - ref));
            }
    report(4, worst <= 1e-12, "binomial p-value exactness", fmt("max abs error %.2e", worst));
}

void criterion5() {
    // stratified inverse-cdf sampling of X | X <= c
    const std::size_t samples = 10000000;
    using fast = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
    boost::math::normal_distribution<double, fast> std_normal;
    double worst = 0.0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (double mu : {-0.5, 0.0, 0.5})
        for (double sigma : {0.5, 1.0, 2.0})
            for (double c : {0.0, 0.5, 1.0}) {
                const double mass = boost::math::cdf(std_normal, (c - mu) / sigma);
                double sum = 0.0;
                for (std::size_t i = 0; i < samples; ++i) {
                    const double u = (static_cast<double>(i) + u01(rng)) / samples;
                    sum += mu + sigma * boost::math::quantile(std_normal, std::max(u * mass, 1e-300));
                }
                worst = std::max(worst, std::abs(sum / samples - trunc_normal_mean(mu, sigma, c)));
            }
    report(5, worst <= 1e-3, "truncated-normal mean", fmt("27 points, max abs error %.2e", worst));
}

void criterion6() {
    double worst = 0.0;
    const std::size_t blocks = 4000;
    for (std::size_t B : {15, 30, 60})
        for (int zd : {0, 2, 5}) {
            auto d = fixture::correlated_pair(B * blocks, fixture::constant(0.0), 600 + B + zd, zd);
            std::vector<int> z;
            for (int k = 0; k < zd; ++k) z.push_back(2 + k);
            auto s = score_series(d, MultiIndex::make(0, 1, z), B);
            double m = 0.0, v = 0.0;
            for (double x : s.scores) m += x;
            m /= s.scores.size();
            for (double x : s.scores) v += (x - m) * (x - m);
            const double sd = std::sqrt(v / (s.scores.size() - 1));
            const double expect = 1.0 / std::sqrt(double(B) - 3.0 - zd);
            worst = std::max(worst, std::abs(sd / expect - 1.0));
        }
    report(6, worst <= 0.05, "Fisher-z block sd calibration", fmt("max relative error %.3f", worst));
}

double tag_rate(const std::function<double(std::size_t)>& r, const HyperConfig& cfg, Mark m, int trials,
                std::uint64_t base) {
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        auto d = fixture::correlated_pair(10000, r, base + t);
        hits += marked_cit(d, MultiIndex::make(0, 1), cfg).tag == m;
    }
    return double(hits) / trials;
}

void criterion7() {
    auto cfg = HyperConfig::preset("large");
    const int trials = 500;
    const double indep = tag_rate(fixture::constant(0.0), cfg, Mark::Independent, trials, 700000);
    const double dep = tag_rate(fixture::constant(0.5), cfg, Mark::Dependent, trials, 710000);
    const double regime = tag_rate(fixture::two_regimes(0.5, 0.0, 500), cfg, Mark::Regime, trials, 720000);
    const double weak = tag_rate(fixture::two_regimes(0.7, 0.3, 500), cfg, Mark::Independent, trials, 730000);
    const bool ok = indep >= 0.90 && dep >= 0.90 && regime >= 0.75 && weak <= 0.15;
    report(7, ok, "mCIT confusion behaviour",
           fmt("independent %.3f, dependent %.3f, regime %.3f, weak->independent %.3f", indep, dep, regime, weak));
}

void criterion8() {
    const int trials = 500;
    int indep = 0, fisher_dep = 0;
    HyperConfig cfg;
    for (int t = 0; t < trials; ++t) {
        auto d = fixture::correlated_pair(10000, fixture::two_regimes(0.5, -0.5, 500), 800000 + t);
        auto q = MultiIndex::make(0, 1);
        indep += marked_cit(d, q, cfg).tag == Mark::Independent;
        fisher_dep += !fisher_z_independent(d, q, cfg.alpha);
    }
    const double a = double(indep) / trials, p = double(fisher_dep) / trials;
    report(8, a <= 0.10 && p <= 0.30, "opposite-sign regimes",
           fmt("marked test independent %.3f, full Fisher-z power %.3f", a, p));
}

void criteria9and10() {
    BenchConfig cfg;
    cfg.samples = {1000, 10000};
    cfg.nodes = {5};
    cfg.density = {0.5};
    cfg.changing = {1};
    cfg.ell_min = 200;
    cfg.ell_max = 2000;
    cfg.seeds = 50;
    cfg.seed = 0;
    cfg.hyper = "large-weak20";
    cfg.methods = {"gld", "sliding"};
    cfg.jobs = 1;
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = bench_run(cfg);
    const double dt = seconds_since(t0);
    auto find = [&](std::size_t n, const std::string& m) -> const BenchAggregate& {
        for (const auto& a : rep.aggregates)
            if (a.samples == n && a.method == m) return a;
        throw std::runtime_error("missing aggregate");
    };
    const auto& small = find(1000, "gld");
    const auto& large = find(10000, "gld");
    const auto& sliding = find(10000, "sliding");
    const double gain = large.regime_f1_mean - small.regime_f1_mean;
    report(9, gain >= 0.1 && large.union_f1_mean >= 0.9 && dt < 600.0, "end-to-end trend with N",
           fmt("regime F1 %.3f -> %.3f, union F1 %.3f, %.0f s", small.regime_f1_mean, large.regime_f1_mean,
               large.union_f1_mean, dt));
    report(10, large.regime_f1_mean >= sliding.regime_f1_mean - 0.05, "sliding-window comparison",
           fmt("gld %.3f vs sliding best cutoffs %.3f", large.regime_f1_mean, sliding.regime_f1_mean));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// runs every command into dir/<tag>, returns concatenated outputs
std::string cli_pass(const fs::path& root, const std::string& tag) {
    const fs::path dir = root / tag;
    fs::create_directories(dir);
    const std::string gld = GLD_CLI_PATH;
    auto sh = [&](const std::string& args, const std::string& out) {
        const std::string cmd = "\"" + gld + "\" " + args + " > \"" + (dir / out).string() + "\" 2>/dev/null";
        return std::system(cmd.c_str());
    };
    const fs::path gen = root / "gen.json", bench = root / "bench.json";
    sh("generate --config \"" + gen.string() + "\" --out \"" + (dir / "gen").string() + "\" --seed 3", "generate.out");
    const std::string csv = (dir / "gen" / "dataset.csv").string();
    sh("discover \"" + csv + "\" --seed 3", "discover.json");
    sh("discover \"" + csv + "\" --seed 3 --prior large", "discover_large.json");
    sh("eval --result \"" + (dir / "discover.json").string() + "\" --spec \"" + (dir / "gen" / "spec.json").string() +
           "\"",
       "eval.json");
    sh("bench --config \"" + bench.string() + "\" --out \"" + (dir / "bench").string() + "\" --seed 3", "bench.out");
    std::string all;
    for (const auto& f : {dir / "generate.out", dir / "gen" / "dataset.csv", dir / "gen" / "spec.json",
                          dir / "discover.json", dir / "discover_large.json", dir / "eval.json", dir / "bench.out",
                          dir / "bench" / "bench.csv", dir / "bench" / "bench.json"}) {
        if (!fs::exists(f)) return {};
        all += f.filename().string() + "\n" + slurp(f);
    }
    return all;
}

void criterion11() {
    const fs::path root = fs::temp_directory_path() / fmt("gld_acceptance_%d", static_cast<int>(std::random_device{}() % 100000));
    fs::create_directories(root);
    std::ofstream(root / "gen.json") << R"({"schema": 1, "nodes": 4, "samples": 3000, "changing": 1, "ell_min": 200, "ell_max": 1000})";
    std::ofstream(root / "bench.json") << R"({"schema": 1, "grid": {"samples": [1000], "nodes": [4]}, "seeds": 2})";
    const auto a = cli_pass(root, "a");
    const auto b = cli_pass(root, "b");
    fs::remove_all(root);
    report(11, !a.empty() && a == b, "CLI determinism", fmt("%zu bytes compared", a.size()));
}

}  // namespace

// optional arguments select criteria by number
int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto want = [&](int id) { return only.empty() || only.count(id) > 0; };
    if (want(1)) criterion1();
    if (want(2)) criterion2();
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7)) criterion7();
    if (want(8)) criterion8();
    if (want(9) || want(10)) criteria9and10();
    if (want(11)) criterion11();
    return failures == 0 ? 0 : 1;
}
