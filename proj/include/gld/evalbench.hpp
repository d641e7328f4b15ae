#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gld/cd_engine.hpp"
#include "gld/dataset.hpp"
#include "gld/graph_core.hpp"
#include "gld/mcit.hpp"
#include "gld/scm_gen.hpp"

namespace gld {

using PairSet = std::set<std::pair<int, int>>;

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
};

Prf score_sets(const PairSet& predicted, const PairSet& truth);
PairSet skeleton_pairs(const Pdag& g);
PairSet skeleton_pairs(const Dag& g);
PairSet true_changing_pairs(const ScmSpec& spec);

Prf regime_f1(const PairSet& predicted_changing, const ScmSpec& truth);
Prf union_skeleton_f1(const Pdag& predicted, const Dag& truth);

struct SlidingWindowResult {
    int windows = 0;
    std::map<std::pair<int, int>, int> counts;  // every unordered pair
    int best_lo = 0;  // changing iff best_lo <= count <= best_hi (empty if lo > hi)
    int best_hi = -1;
    Prf best;
    PairSet best_changing;
    PairSet present;  // count >= 1

    // not deployable: the cutoffs are chosen against the truth
    Prf at_cutoffs(int lo, int hi, const PairSet& truth) const;
};

SlidingWindowResult sliding_window_baseline(const Dataset& data, std::size_t window_size, double alpha,
                                            const PairSet& truth_changing, const CdOptions& cd = {});

Pdag vanilla_cd(const Dataset& data, double alpha, const CdOptions& cd = {});

struct BenchConfig {
    std::vector<std::size_t> samples{1000, 10000};
    std::vector<int> nodes{5};
    std::vector<double> density{0.5};
    std::vector<int> changing{1};
    std::vector<std::string> noise{"normal"};
    int max_parents = 3;
    double ell_min = 200.0;
    double ell_max = 1000.0;
    double gamma = 0.3;
    int seeds = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> methods{"gld", "vanilla", "sliding"};
    std::string hyper = "generic";
    double a_min = 0.0;
    double alpha = 0.05;
    std::size_t window_size = 0;  // 0: samples / 10
    int jobs = 1;
    bool timing = false;
};

BenchConfig bench_config_from_json(const nlohmann::json& j);

struct BenchRow {
    std::size_t samples;
    int nodes;
    double density;
    int changing;
    std::string noise;
    std::uint64_t seed;
    std::string method;
    std::string hyper;
    Prf regime;
    Prf uni;
    double runtime_s;
};

struct BenchAggregate {
    std::size_t samples;
    int nodes;
    double density;
    int changing;
    std::string noise;
    std::string method;
    int runs = 0;
    double regime_f1_mean = 0.0, regime_f1_err = 0.0;
    double union_f1_mean = 0.0, union_f1_err = 0.0;
    double regime_precision = 0.0, regime_precision_err = 0.0;  // pooled counts
    double regime_recall = 0.0, regime_recall_err = 0.0;
    double runtime_median = 0.0, runtime_p10 = 0.0, runtime_p90 = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchAggregate> aggregates;
};

// one seed of one grid point for one method
BenchRow bench_single(const BenchConfig& cfg, std::size_t samples, int nodes, double density, int changing,
                      const std::string& noise, std::uint64_t seed, const std::string& method);

BenchReport bench_run(const BenchConfig& cfg);

void write_bench_csv(std::ostream& os, const BenchReport& r);
nlohmann::json to_json(const BenchReport& r);

}  // namespace gld
