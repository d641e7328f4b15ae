#include "gld/evalbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <mutex>
#include <thread>

#include "gld/mcd_core.hpp"

namespace gld {

Prf score_sets(const PairSet& pred, const PairSet& truth) {
    Prf r;
    for (const auto& p : pred) (truth.count(p) ? r.tp : r.fp)++;
    for (const auto& p : truth)
        if (!pred.count(p)) ++r.fn;
    if (pred.empty() && truth.empty()) {
        r.precision = r.recall = r.f1 = 1.0;
        return r;
    }
    r.precision = r.tp + r.fp > 0 ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
    r.recall = r.tp + r.fn > 0 ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
    r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

PairSet skeleton_pairs(const Pdag& g) {
    PairSet s;
    for (const auto& e : g.edges()) s.insert({e.a, e.b});
    return s;
}

PairSet skeleton_pairs(const Dag& g) {
    PairSet s;
    for (auto [a, b] : g.edges()) s.insert({std::min(a, b), std::max(a, b)});
    return s;
}

PairSet true_changing_pairs(const ScmSpec& spec) {
    PairSet s;
    for (const auto& c : spec.changing)
        if (c.indicator.nontrivial()) s.insert({std::min(c.from, c.to), std::max(c.from, c.to)});
    return s;
}

Prf regime_f1(const PairSet& predicted, const ScmSpec& truth) { return score_sets(predicted, true_changing_pairs(truth)); }

Prf union_skeleton_f1(const Pdag& predicted, const Dag& truth) {
    return score_sets(skeleton_pairs(predicted), skeleton_pairs(truth));
}

Pdag vanilla_cd(const Dataset& data, double alpha, const CdOptions& cd) {
    return run_cd([&](const MultiIndex& q) { return fisher_z_independent(data, q, alpha); }, data.vars(), cd).graph;
}

Prf SlidingWindowResult::at_cutoffs(int lo, int hi, const PairSet& truth) const {
    PairSet pred;
    for (const auto& [p, c] : counts)
        if (c >= lo && c <= hi) pred.insert(p);
    return score_sets(pred, truth);
}

SlidingWindowResult sliding_window_baseline(const Dataset& data, std::size_t window_size, double alpha,
                                            const PairSet& truth, const CdOptions& cd) {
    if (window_size == 0) throw std::invalid_argument("sliding window: window size 0");
    SlidingWindowResult r;
    const int k = data.vars();
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) r.counts[{a, b}] = 0;
    for (std::size_t w = 0; (w + 1) * window_size <= data.rows(); ++w) {
        Dataset win;
        win.names = data.names;
        for (const auto& c : data.cols)
            win.cols.emplace_back(c.begin() + w * window_size, c.begin() + (w + 1) * window_size);
        auto g = vanilla_cd(win, alpha, cd);
        for (const auto& e : g.edges()) ++r.counts[{e.a, e.b}];
        ++r.windows;
    }
    for (const auto& [p, c] : r.counts)
        if (c > 0) r.present.insert(p);

    // empty prediction first, then every cutoff pair
    r.best = score_sets({}, truth);
    for (int lo = 0; lo <= r.windows; ++lo)
        for (int hi = lo; hi <= r.windows; ++hi) {
            auto f = r.at_cutoffs(lo, hi, truth);
            if (f.f1 > r.best.f1) {
                r.best = f;
                r.best_lo = lo;
                r.best_hi = hi;
            }
        }
    for (const auto& [p, c] : r.counts)
        if (c >= r.best_lo && c <= r.best_hi) r.best_changing.insert(p);
    return r;
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
    if (!j.contains("schema")) throw std::invalid_argument("bench config: missing key 'schema'");
    if (j.at("schema").get<int>() != 1) throw std::invalid_argument("bench config: unsupported schema version");
    BenchConfig c;
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        c.samples = g.value("samples", c.samples);
        c.nodes = g.value("nodes", c.nodes);
        c.density = g.value("density", c.density);
        c.changing = g.value("changing", c.changing);
        c.noise = g.value("noise", c.noise);
    }
    c.max_parents = j.value("max_parents", c.max_parents);
    c.ell_min = j.value("ell_min", c.ell_min);
    c.ell_max = j.value("ell_max", c.ell_max);
    c.gamma = j.value("gamma", c.gamma);
    c.seeds = j.value("seeds", c.seeds);
    c.seed = j.value("seed", c.seed);
    c.methods = j.value("methods", c.methods);
    c.hyper = j.value("hyper", c.hyper);
    c.a_min = j.value("a_min", c.a_min);
    c.alpha = j.value("alpha", c.alpha);
    c.window_size = j.value("window_size", c.window_size);
    for (const auto& m : c.methods)
        if (m != "gld" && m != "vanilla" && m != "sliding") throw std::invalid_argument("bench config: unknown method " + m);
    HyperConfig::preset(c.hyper);
    return c;
}

BenchRow bench_single(const BenchConfig& cfg, std::size_t samples, int nodes, double density, int changing,
                      const std::string& noise, std::uint64_t seed, const std::string& method) {
    GenConfig g;
    g.nodes = nodes;
    g.density = density;
    g.max_parents = cfg.max_parents;
    g.changing = changing;
    g.samples = samples;
    g.meta.ell_min = cfg.ell_min;
    g.meta.ell_max = cfg.ell_max;
    g.meta.gamma = cfg.gamma;
    g.noise.kind = noise_kind_from_string(noise);
    auto spec = generate_spec(g, seed);
    auto data = simulate(spec, samples, seed);
    auto truth = true_changing_pairs(spec);

    BenchRow row{samples, nodes, density, changing, noise, seed, method, cfg.hyper, {}, {}, 0.0};
    auto t0 = std::chrono::steady_clock::now();
    if (method == "gld") {
        auto hc = HyperConfig::preset(cfg.hyper);
        hc.alpha = cfg.alpha;
        hc.a_min = cfg.a_min;
        auto res = discover(data, hc);
        row.regime = score_sets(res.changing_pairs(), truth);
        row.uni = union_skeleton_f1(res.raw_union_graph, spec.dag);
    } else if (method == "vanilla") {
        row.regime = score_sets({}, truth);
        row.uni = union_skeleton_f1(vanilla_cd(data, cfg.alpha), spec.dag);
    } else if (method == "sliding") {
        std::size_t w = cfg.window_size ? cfg.window_size : std::max<std::size_t>(samples / 10, 1);
        auto sw = sliding_window_baseline(data, w, cfg.alpha, truth);
        row.regime = sw.best;
        row.uni = score_sets(sw.present, skeleton_pairs(spec.dag));
    } else {
        throw std::invalid_argument("bench: unknown method " + method);
    }
    if (cfg.timing) row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

namespace {

double quantile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    double pos = p * (v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

void mean_err(const std::vector<double>& v, double& mean, double& err) {
    mean = err = 0.0;
    if (v.empty()) return;
    for (double x : v) mean += x;
    mean /= v.size();
    if (v.size() < 2) return;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    err = std::sqrt(ss / (v.size() - 1) / v.size());
}

}  // namespace

BenchReport bench_run(const BenchConfig& cfg) {
    struct Task {
        std::size_t samples;
        int nodes;
        double density;
        int changing;
        std::string noise;
        std::uint64_t seed;
        std::string method;
    };
    std::vector<Task> tasks;
    for (auto n : cfg.samples)
        for (int k : cfg.nodes)
            for (double d : cfg.density)
                for (int c : cfg.changing)
                    for (const auto& nz : cfg.noise)
                        for (int s = 0; s < cfg.seeds; ++s)
                            for (const auto& m : cfg.methods)
                                tasks.push_back({n, k, d, c, nz, cfg.seed + static_cast<std::uint64_t>(s), m});

    BenchReport rep;
    rep.rows.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < tasks.size();) {
            try {
                const auto& t = tasks[i];
                rep.rows[i] = bench_single(cfg, t.samples, t.nodes, t.density, t.changing, t.noise, t.seed, t.method);
            } catch (...) {
                std::lock_guard lock(fail_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // aggregate per grid point and method, in first-appearance order
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        auto same = [&](const BenchRow& o) {
            return o.samples == r.samples && o.nodes == r.nodes && o.density == r.density && o.changing == r.changing &&
                   o.noise == r.noise && o.method == r.method;
        };
        bool dup = false;
        for (auto j : seen) dup = dup || same(rep.rows[j]);
        if (dup) continue;
        seen.push_back(i);

        BenchAggregate a{r.samples, r.nodes, r.density, r.changing, r.noise, r.method};
        std::vector<double> rf, uf, rt;
        int tp = 0, fp = 0, fn = 0;
        for (const auto& o : rep.rows) {
            if (!same(o)) continue;
            ++a.runs;
            rf.push_back(o.regime.f1);
            uf.push_back(o.uni.f1);
            rt.push_back(o.runtime_s);
            tp += o.regime.tp;
            fp += o.regime.fp;
            fn += o.regime.fn;
        }
        mean_err(rf, a.regime_f1_mean, a.regime_f1_err);
        mean_err(uf, a.union_f1_mean, a.union_f1_err);
        auto binom = [](int k, int n, double& p, double& e) {
            p = n > 0 ? static_cast<double>(k) / n : 0.0;
            e = n > 0 ? std::sqrt(p * (1 - p) / n) : 0.0;
        };
        binom(tp, tp + fp, a.regime_precision, a.regime_precision_err);
        binom(tp, tp + fn, a.regime_recall, a.regime_recall_err);
        a.runtime_median = quantile(rt, 0.5);
        a.runtime_p10 = quantile(rt, 0.1);
        a.runtime_p90 = quantile(rt, 0.9);
        rep.aggregates.push_back(a);
    }
    return rep;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_bench_csv(std::ostream& os, const BenchReport& r) {
    os << "samples,nodes,density,changing,noise,seed,method,hyper_set,regime_precision,regime_recall,regime_f1,"
          "union_f1,runtime_s\n";
    std::string hyper = r.rows.empty() ? "" : r.rows.front().hyper;
    for (const auto& x : r.rows)
        os << x.samples << ',' << x.nodes << ',' << num(x.density) << ',' << x.changing << ',' << x.noise << ','
           << x.seed << ',' << x.method << ',' << x.hyper << ',' << num(x.regime.precision) << ','
           << num(x.regime.recall) << ',' << num(x.regime.f1) << ',' << num(x.uni.f1) << ',' << num(x.runtime_s)
           << '\n';
    for (const auto& a : r.aggregates)
        os << a.samples << ',' << a.nodes << ',' << num(a.density) << ',' << a.changing << ',' << a.noise << ",mean,"
           << a.method << ',' << hyper << ',' << num(a.regime_precision) << ',' << num(a.regime_recall) << ','
           << num(a.regime_f1_mean) << ',' << num(a.union_f1_mean) << ',' << num(a.runtime_median) << '\n';
}

nlohmann::json to_json(const BenchReport& r) {
    nlohmann::json rows = nlohmann::json::array(), agg = nlohmann::json::array();
    for (const auto& x : r.rows)
        rows.push_back({{"samples", x.samples},
                        {"nodes", x.nodes},
                        {"density", x.density},
                        {"changing", x.changing},
                        {"noise", x.noise},
                        {"seed", x.seed},
                        {"method", x.method},
                        {"hyper_set", x.hyper},
                        {"regime_precision", x.regime.precision},
                        {"regime_recall", x.regime.recall},
                        {"regime_f1", x.regime.f1},
                        {"union_f1", x.uni.f1},
                        {"runtime_s", x.runtime_s}});
    for (const auto& a : r.aggregates)
        agg.push_back({{"samples", a.samples},
                       {"nodes", a.nodes},
                       {"density", a.density},
                       {"changing", a.changing},
                       {"noise", a.noise},
                       {"method", a.method},
                       {"runs", a.runs},
                       {"regime_f1", {{"mean", a.regime_f1_mean}, {"err", a.regime_f1_err}}},
                       {"union_f1", {{"mean", a.union_f1_mean}, {"err", a.union_f1_err}}},
                       {"regime_precision", {{"value", a.regime_precision}, {"err", a.regime_precision_err}}},
                       {"regime_recall", {{"value", a.regime_recall}, {"err", a.regime_recall_err}}},
                       {"runtime_s", {{"median", a.runtime_median}, {"p10", a.runtime_p10}, {"p90", a.runtime_p90}}}});
    return {{"rows", rows}, {"aggregates", agg}};
}

}  // namespace gld
