#include "gld/mcd_core.hpp"

#include <algorithm>

#include "gld/indicator_rel.hpp"

namespace gld {

bool pseudo_cit(const MultiIndex& j, const StateAssignment& sJ, const MarkedFn& marked,
                std::set<MultiIndex>& new_marked) {
    auto it = sJ.find(j);
    if (it != sJ.end()) return it->second == 0;
    switch (marked(j)) {
        case Mark::Independent: return true;
        case Mark::Dependent: return false;
        case Mark::Regime:
            new_marked.insert(j);
            return false;
    }
    return false;
}

StateRun run_cd_state(const StateAssignment& sJ, const MarkedFn& marked, int n, const CdOptions& opts) {
    StateRun r;
    r.cd = run_cd([&](const MultiIndex& q) { return pseudo_cit(q, sJ, marked, r.new_marked); }, n, opts);
    return r;
}

std::set<std::pair<int, int>> McdResult::changing_pairs() const {
    std::set<std::pair<int, int>> out;
    if (raw_state_graphs.size() < 2) return out;
    for (int a = 0; a < node_count; ++a)
        for (int b = a + 1; b < node_count; ++b) {
            bool on = false, off = false;
            for (const auto& g : raw_state_graphs) (g.adjacent(a, b) ? on : off) = true;
            if (on && off) out.insert({a, b});
        }
    return out;
}

McdResult run_mcd(const MarkedFn& marked_raw, const ImplicationFn& implies, int n, const McdOptions& opts) {
    McdResult res;
    res.node_count = n;
    std::mutex mu;
    MarkedFn marked = [&](const MultiIndex& q) {
        {
            std::lock_guard lock(mu);
            auto it = res.tested.find(q);
            if (it != res.tested.end()) return it->second;
        }
        Mark m = marked_raw(q);
        std::lock_guard lock(mu);
        auto [it, fresh] = res.tested.emplace(q, m);
        if (fresh) res.query_log.push_back(q);
        return it->second;
    };

    std::vector<MultiIndex> J;
    std::vector<std::pair<int, int>> cd_conflicts;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        res.iterations = iter;
        StateContext ctx{&res.tested, implies, opts.max_indicators};
        res.table = construct_state_space(J, ctx);
        res.raw_state_graphs.clear();
        cd_conflicts.clear();
        std::set<MultiIndex> fresh;
        for (std::size_t s = 0; s < res.table.states.size(); ++s) {
            StateAssignment sJ;
            for (std::size_t k = 0; k < res.table.marked.size(); ++k) sJ[res.table.marked[k]] = res.table.values[s][k];
            auto run = run_cd_state(sJ, marked, n, opts.cd);
            fresh.insert(run.new_marked.begin(), run.new_marked.end());
            cd_conflicts.insert(cd_conflicts.end(), run.cd.conflicts.begin(), run.cd.conflicts.end());
            res.raw_state_graphs.push_back(std::move(run.cd.graph));
        }
        if (iter == 1) res.raw_union_graph = res.raw_state_graphs.front();
        for (const auto& j : J) fresh.erase(j);
        if (fresh.empty()) {
            res.converged = true;
            break;
        }
        J.insert(J.end(), fresh.begin(), fresh.end());
    }

    auto tr = transfer_orientations(res.raw_state_graphs, res.raw_union_graph);
    res.union_graph = std::move(tr.union_graph);
    res.state_graphs = std::move(tr.states);

    if (!res.converged)
        res.conflicts.push_back("iteration cap " + std::to_string(opts.max_iterations) + " reached");
    res.conflicts.insert(res.conflicts.end(), res.table.conflicts.begin(), res.table.conflicts.end());
    std::sort(cd_conflicts.begin(), cd_conflicts.end());
    cd_conflicts.erase(std::unique(cd_conflicts.begin(), cd_conflicts.end()), cd_conflicts.end());
    for (auto [a, b] : cd_conflicts)
        res.conflicts.push_back("orientation conflict " + std::to_string(a) + "-" + std::to_string(b));
    for (auto [a, b] : tr.conflicts)
        res.conflicts.push_back("transfer conflict " + std::to_string(a) + "-" + std::to_string(b));
    return res;
}

nlohmann::json to_json(const McdResult& r, const std::map<MultiIndex, MarkedValue>* diagnostics) {
    auto changing = r.changing_pairs();
    nlohmann::json uni = to_json(r.union_graph);
    for (auto& e : uni["edges"]) {
        int a = e["from"], b = e["to"];
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        e["changing"] = changing.count(key) > 0;
        e["indicator"] = nullptr;
        for (const auto& m : r.table.indicators)
            if (m.representor.pair() == key) e["indicator"] = m.id;
    }

    nlohmann::json inds = nlohmann::json::array();
    for (const auto& m : r.table.indicators) {
        nlohmann::json edge = nullptr;
        if (r.raw_union_graph.adjacent(m.representor.x, m.representor.y))
            edge = {m.representor.x, m.representor.y};
        inds.push_back({{"id", m.id}, {"representor", to_json(m.representor)}, {"edge", edge}, {"fallback", m.fallback}});
    }

    nlohmann::json states = nlohmann::json::array();
    for (std::size_t s = 0; s < r.table.states.size(); ++s)
        states.push_back({{"bits", r.table.bits(s)},
                          {"graph", to_json(r.state_graphs.at(s))},
                          {"raw_graph", to_json(r.raw_state_graphs.at(s))}});

    nlohmann::json marked = nlohmann::json::array();
    for (std::size_t k = 0; k < r.table.marked.size(); ++k)
        marked.push_back({{"test", to_json(r.table.marked[k])}, {"monomials", r.table.reprs.at(k).monomials}});

    nlohmann::json diag = {{"iterations", r.iterations},
                           {"converged", r.converged},
                           {"conflicts", r.conflicts},
                           {"query_count", r.query_log.size()}};
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& q : r.query_log) {
        nlohmann::json t = {{"test", to_json(q)}, {"mark", to_string(r.tested.at(q))}};
        if (diagnostics) {
            auto it = diagnostics->find(q);
            if (it != diagnostics->end()) t["mcit"] = it->second.diagnostics();
        }
        tests.push_back(std::move(t));
    }
    diag["tests"] = std::move(tests);

    return {{"union", uni}, {"indicators", inds}, {"states", states}, {"marked_tests", marked}, {"diagnostics", diag}};
}

MarkedOracle::MarkedOracle(const Dag& dag, const std::vector<std::pair<int, int>>& changing)
    : states_(state_dags(dag, changing)) {}

Mark MarkedOracle::operator()(const MultiIndex& q) const {
    bool sep = false, con = false;
    for (const auto& g : states_) (d_separated(g, q) ? sep : con) = true;
    if (sep && con) return Mark::Regime;
    return sep ? Mark::Independent : Mark::Dependent;
}

bool MarkedOracle::implies(const std::vector<MultiIndex>& lhs, const MultiIndex& rhs) const {
    for (const auto& g : states_) {
        bool all_off = true;
        for (const auto& q : lhs) all_off = all_off && d_separated(g, q);
        if (all_off && !d_separated(g, rhs)) return false;
    }
    return true;
}

Mark marked_oracle(const ScmSpec& spec, const MultiIndex& q) { return MarkedOracle(spec)(q); }

McdResult discover(const Dataset& data, const HyperConfig& cfg, const McdOptions& opts,
                   std::map<MultiIndex, MarkedValue>* diagnostics) {
    MarkedCit cit(data, cfg);
    ImplicationTester imp(data, cfg);
    auto res = run_mcd([&](const MultiIndex& q) { return cit.tag(q); },
                       [&](const std::vector<MultiIndex>& lhs, const MultiIndex& rhs) { return imp(lhs, rhs); },
                       data.vars(), opts);
    if (diagnostics) *diagnostics = cit.snapshot();
    return res;
}

}  // namespace gld
