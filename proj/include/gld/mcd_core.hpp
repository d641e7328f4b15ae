#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gld/cd_engine.hpp"
#include "gld/graph_core.hpp"
#include "gld/mcit.hpp"
#include "gld/scm_gen.hpp"
#include "gld/state_space.hpp"

namespace gld {

using MarkedFn = std::function<Mark(const MultiIndex&)>;

// value 1 = dependent in the current state
using StateAssignment = std::map<MultiIndex, std::uint8_t>;

// state-restricted CI answer; true = independent. Regime answers are recorded in new_marked.
bool pseudo_cit(const MultiIndex& j, const StateAssignment& sJ, const MarkedFn& marked,
                std::set<MultiIndex>& new_marked);

struct StateRun {
    CdResult cd;
    std::set<MultiIndex> new_marked;
};

StateRun run_cd_state(const StateAssignment& sJ, const MarkedFn& marked, int node_count, const CdOptions& opts = {});

struct McdOptions {
    CdOptions cd;
    int max_iterations = 10;
    int max_indicators = 12;
};

struct McdResult {
    int node_count = 0;
    Pdag union_graph;                 // after orientation transfer
    Pdag raw_union_graph;             // round-1 CD output
    std::vector<Pdag> raw_state_graphs;
    std::vector<Pdag> state_graphs;   // after orientation transfer
    StateTable table;
    std::map<MultiIndex, Mark> tested;
    std::vector<MultiIndex> query_log;
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> conflicts;

    bool has_conflicts() const { return !conflicts.empty(); }
    // pairs adjacent in some state graphs and absent in others
    std::set<std::pair<int, int>> changing_pairs() const;
};

McdResult run_mcd(const MarkedFn& marked, const ImplicationFn& implies, int node_count, const McdOptions& opts = {});

nlohmann::json to_json(const McdResult& r, const std::map<MultiIndex, MarkedValue>* diagnostics = nullptr);

// regime-marked independence oracle over every combination of the changing edges
class MarkedOracle {
public:
    MarkedOracle(const Dag& dag, const std::vector<std::pair<int, int>>& changing);
    explicit MarkedOracle(const ScmSpec& spec) : MarkedOracle(spec.dag, spec.changing_pairs()) {}

    Mark operator()(const MultiIndex& q) const;
    bool implies(const std::vector<MultiIndex>& lhs, const MultiIndex& rhs) const;

    const std::vector<Dag>& states() const { return states_; }

private:
    std::vector<Dag> states_;
};

Mark marked_oracle(const ScmSpec& spec, const MultiIndex& q);

// data-backed run: memoized marked CIT plus block-wise implication tests
McdResult discover(const Dataset& data, const HyperConfig& cfg, const McdOptions& opts = {},
                   std::map<MultiIndex, MarkedValue>* diagnostics = nullptr);

}  // namespace gld
