#include "gld/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "gld/evalbench.hpp"
#include "gld/mcd_core.hpp"
#include "gld/scm_gen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gld::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("gld", sink);
    log->set_pattern("[%l] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("GLD_LOG")) {
        std::string v = env;
        if (v == "error") level = spdlog::level::err;
        else if (v == "info") level = spdlog::level::info;
        else if (v == "debug") level = spdlog::level::debug;
    }
    log->set_level(level);
    return log;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return read_csv(in);
    } catch (const std::runtime_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct GenerateArgs {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a, spdlog::logger& log) {
    auto j = read_json(a.config);
    GenConfig cfg;
    try {
        cfg = gen_config_from_json(j);
    } catch (const std::exception& e) {
        throw UsageError(a.config + ": " + e.what());
    }
    const std::uint64_t seed = a.seed ? *a.seed : j.value("seed", std::uint64_t{0});
    log.info("generate: {} nodes, {} samples, seed {}", cfg.nodes, cfg.samples, seed);
    auto spec = generate_spec(cfg, seed);
    auto data = simulate(spec, cfg.samples, seed);
    std::ostringstream csv;
    write_csv(csv, data);
    write_text(fs::path(a.out) / "dataset.csv", csv.str());
    write_text(fs::path(a.out) / "spec.json", to_json(spec).dump(2) + "\n");
    return kOk;
}

struct DiscoverArgs {
    std::string data;
    std::string out;
    std::string prior = "generic";
    double alpha = 0.05;
    std::optional<double> alpha_weak;
    double a_min = 0.0;
    int max_cond = -1;
    bool bootstrap = false;
    std::uint64_t seed = 0;
};

int cmd_discover(const DiscoverArgs& a, std::ostream& out, spdlog::logger& log) {
    auto data = read_dataset(a.data);
    if (data.vars() < 2) throw UsageError(a.data + ": need at least two columns");
    HyperConfig cfg = HyperConfig::preset(a.prior);
    cfg.alpha = a.alpha;
    if (a.alpha_weak) cfg.alpha_weak = *a.alpha_weak;
    cfg.a_min = a.a_min;
    cfg.seed = a.seed;
    if (a.bootstrap) cfg.quantile = QuantileMethod::Bootstrap;
    McdOptions opts;
    opts.cd.max_cond_size = a.max_cond;
    log.info("discover: {} variables, {} rows, prior {}", data.vars(), data.rows(), a.prior);

    std::map<MultiIndex, MarkedValue> diag;
    auto res = discover(data, cfg, opts, &diag);
    auto j = to_json(res, &diag);
    j["variables"] = data.names;
    j["config"] = {{"prior", a.prior},       {"alpha", a.alpha}, {"alpha_weak", cfg.alpha_weak}, {"a_min", a.a_min},
                   {"max_cond", a.max_cond}, {"bootstrap", a.bootstrap}, {"seed", a.seed}};
    const std::string text = j.dump(2) + "\n";
    if (a.out.empty()) out << text;
    else write_text(a.out, text);
    for (const auto& c : res.conflicts) log.warn("conflict: {}", c);
    log.info("discover: {} states, {} changing links", res.table.states.size(), res.changing_pairs().size());
    return res.has_conflicts() ? kConflicts : kOk;
}

struct BenchArgs {
    std::string config;
    std::string out = ".";
    int jobs = 1;
    bool timing = false;
    std::optional<std::uint64_t> seed;
};

int cmd_bench(const BenchArgs& a, spdlog::logger& log) {
    BenchConfig cfg;
    try {
        cfg = bench_config_from_json(read_json(a.config));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(a.config + ": " + e.what());
    }
    if (a.seed) cfg.seed = *a.seed;
    cfg.jobs = a.jobs;
    cfg.timing = a.timing;
    log.info("bench: {} seeds per grid point, {} jobs", cfg.seeds, cfg.jobs);
    auto rep = bench_run(cfg);
    std::ostringstream csv;
    write_bench_csv(csv, rep);
    write_text(fs::path(a.out) / "bench.csv", csv.str());
    write_text(fs::path(a.out) / "bench.json", to_json(rep).dump(2) + "\n");
    return kOk;
}

struct EvalArgs {
    std::string result;
    std::string spec;
    std::string out;
};

json prf_json(const Prf& p) {
    return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}, {"tp", p.tp}, {"fp", p.fp}, {"fn", p.fn}};
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    auto rj = read_json(a.result);
    ScmSpec spec;
    Pdag uni;
    PairSet changing;
    try {
        spec = spec_from_json(read_json(a.spec));
        uni = pdag_from_json(rj.at("union"));
        for (const auto& e : rj.at("union").at("edges"))
            if (e.value("changing", false)) {
                int x = e.at("from"), y = e.at("to");
                changing.insert({std::min(x, y), std::max(x, y)});
            }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("eval: ") + e.what());
    }
    if (uni.node_count() != spec.dag.node_count()) throw UsageError("eval: node count mismatch");
    json j = {{"regime", prf_json(regime_f1(changing, spec))}, {"union", prf_json(union_skeleton_f1(uni, spec.dag))}};
    const std::string text = j.dump(2) + "\n";
    if (a.out.empty()) out << text;
    else write_text(a.out, text);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);
    CLI::App app{"regime-aware causal discovery", "gld"};
    app.require_subcommand(1);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "sample a model and write dataset.csv + spec.json");
    gen->add_option("--config", ga.config, "generator config (JSON)")->required();
    gen->add_option("--out", ga.out, "output directory");
    gen->add_option("--seed", ga.seed, "master seed (overrides the config)");

    DiscoverArgs da;
    auto* dis = app.add_subcommand("discover", "run regime-aware discovery on a CSV");
    dis->add_option("data", da.data, "dataset CSV")->required();
    dis->add_option("--out", da.out, "result JSON (stdout when omitted)");
    dis->add_option("--prior", da.prior, "hyperparameter set")
        ->check(CLI::IsMember({"generic", "large", "generic-weak20", "large-weak20"}));
    dis->add_option("--alpha", da.alpha, "significance level")->check(CLI::Range(1e-9, 0.5));
    dis->add_option("--alpha-weak", da.alpha_weak, "weak-regime acceptance level (default from prior)")
        ->check(CLI::Range(1e-9, 0.99));
    dis->add_option("--a-min", da.a_min, "minimum regime share for the binomial n0_min rule (0: off)")
        ->check(CLI::Range(0.0, 0.5));
    dis->add_option("--max-cond", da.max_cond, "largest conditioning set (-1: unbounded)");
    dis->add_flag("--bootstrap", da.bootstrap, "bootstrap the homogeneity quantile");
    dis->add_option("--seed", da.seed, "seed for the bootstrap");

    BenchArgs ba;
    auto* ben = app.add_subcommand("bench", "multi-seed benchmark");
    ben->add_option("--config", ba.config, "bench config (JSON)")->required();
    ben->add_option("--out", ba.out, "output directory");
    ben->add_option("--jobs", ba.jobs, "worker threads")->check(CLI::PositiveNumber);
    ben->add_flag("--timing", ba.timing, "record wall-clock runtimes");
    ben->add_option("--seed", ba.seed, "master seed (overrides the config)");

    EvalArgs ea;
    auto* ev = app.add_subcommand("eval", "score a discovery result against a spec");
    ev->add_option("--result", ea.result, "discover output")->required();
    ev->add_option("--spec", ea.spec, "generator spec.json")->required();
    ev->add_option("--out", ea.out, "metrics JSON (stdout when omitted)");

    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*gen) return cmd_generate(ga, *log);
        if (*dis) return cmd_discover(da, out, *log);
        if (*ben) return cmd_bench(ba, *log);
        if (*ev) return cmd_eval(ea, out);
    } catch (const UsageError& e) {
        log->error("{}", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        log->error("{}", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        log->error("{}", e.what());
        return kUsage;
    }
    return kUsage;
}

}  // namespace gld::cli
