#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gld/dataset.hpp"
#include "gld/graph_core.hpp"
#include "gld/rng.hpp"

namespace gld {

struct IndicatorMeta {
    double ell_min = 200.0;
    double ell_max = 5000.0;
    double gamma = 0.3;
    double a_lo = 0.3;  // range of the independent-fraction target a
    double a_hi = 0.7;

    void validate() const;
};

struct Indicator {
    std::vector<std::uint8_t> values;  // 1: link active

    std::size_t size() const { return values.size(); }
    bool nontrivial() const;
    double off_fraction() const;

    // run lengths, first run has value 1 (may be empty)
    std::vector<std::size_t> runs() const;
    static Indicator from_runs(const std::vector<std::size_t>& runs);
};

enum class NoiseKind { Normal, Laplace, Uniform, Cauchy, Beta, Multimodal, Mixed };

const char* to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& s);

// param: normal sigma, laplace scale, uniform half-width, cauchy scale,
// beta x (shape a = 1/x, b = 5), multimodal offset x (N(0,1) and N(x,1) mixed)
struct NoiseSpec {
    NoiseKind kind = NoiseKind::Normal;
    double param = 1.0;

    void validate() const;
};

struct EdgeParam {
    int from;
    int to;
    double magnitude;
    int sign;

    double coef() const { return sign * magnitude; }
};

struct ChangingEdge {
    int from;
    int to;
    Indicator indicator;
};

struct ScmSpec {
    Dag dag;
    std::vector<EdgeParam> edges;  // sorted by (from, to)
    std::vector<NoiseSpec> noise;   // per node, resolved (never Mixed)
    std::vector<ChangingEdge> changing;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    std::vector<std::pair<int, int>> changing_pairs() const;
    const EdgeParam& edge(int from, int to) const;
};

Dag generate_dag(int node_count, int max_parents_per_node, int link_budget, std::uint64_t seed);
int legal_slot_count(int node_count, int max_parents_per_node);

Indicator sample_indicator(std::size_t n, const IndicatorMeta& meta, double a, std::uint64_t seed);

std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed);

struct GenConfig {
    int nodes = 5;
    int max_parents = 3;
    double density = 0.5;  // fraction of node pairs; ignored when links >= 0
    int links = -1;
    int changing = 1;
    std::size_t samples = 10000;
    IndicatorMeta meta;
    double coef_min = 0.5;
    double coef_max = 1.0;
    NoiseSpec noise;

    int link_budget() const;
};

ScmSpec generate_spec(const GenConfig& cfg, std::uint64_t seed);

Dataset simulate(const ScmSpec& spec, std::size_t n, std::uint64_t seed);

// every combination of the changing edges switched off (bit k set = edge k present)
std::vector<Dag> state_dags(const Dag& dag, const std::vector<std::pair<int, int>>& changing);

nlohmann::json to_json(const ScmSpec& spec);
ScmSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const nlohmann::json& j);

}  // namespace gld
