#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gld/graph_core.hpp"
#include "gld/mcit.hpp"

namespace gld {

// true when "all lhs independent" implies "rhs independent"
using ImplicationFn = std::function<bool(const std::vector<MultiIndex>& lhs, const MultiIndex& rhs)>;

struct ModelIndicator {
    int id = 0;
    MultiIndex representor;
    bool fallback = false;  // a marked test promoted to its own indicator
};

struct IndicatorRepr {
    MultiIndex test;
    std::vector<std::vector<int>> monomials;  // AND over monomials, OR within

    bool eval(const std::vector<std::uint8_t>& bits) const;
};

struct StateTable {
    std::vector<ModelIndicator> indicators;
    std::vector<MultiIndex> marked;
    std::vector<IndicatorRepr> reprs;                // parallel to marked
    std::vector<std::vector<std::uint8_t>> states;   // bit k: indicator k
    std::vector<std::vector<std::uint8_t>> values;   // [state][marked j], 1 = dependent
    std::vector<std::string> conflicts;

    std::size_t kappa() const { return indicators.size(); }
    std::string bits(std::size_t state) const;
};

struct StateContext {
    const std::map<MultiIndex, Mark>* tested = nullptr;
    ImplicationFn implies;
    int max_indicators = 12;
};

std::vector<ModelIndicator> discover_model_indicators(const std::map<MultiIndex, Mark>& tested,
                                                      const std::vector<MultiIndex>& marked,
                                                      const ImplicationFn& implies);

// empty monomial list when nothing could be certified
IndicatorRepr represent_indicator(const std::vector<ModelIndicator>& model, const MultiIndex& j,
                                  const ImplicationFn& implies);

StateTable construct_state_space(const std::vector<MultiIndex>& J, const StateContext& ctx);

struct TransferResult {
    std::vector<Pdag> states;
    Pdag union_graph;
    std::vector<std::pair<int, int>> conflicts;
    int rounds = 0;
};

TransferResult transfer_orientations(const std::vector<Pdag>& per_state, const Pdag& union_graph);

nlohmann::json to_json(const StateTable& t);

}  // namespace gld
