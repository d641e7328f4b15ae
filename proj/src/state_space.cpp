#include "gld/state_space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gld {

bool IndicatorRepr::eval(const std::vector<std::uint8_t>& bits) const {
    for (const auto& mono : monomials) {
        bool any = false;
        for (int id : mono) any = any || bits.at(id) != 0;
        if (!any) return false;
    }
    return true;
}

std::string StateTable::bits(std::size_t s) const {
    std::string out;
    for (auto b : states.at(s)) out += b ? '1' : '0';
    return out;
}

std::vector<ModelIndicator> discover_model_indicators(const std::map<MultiIndex, Mark>& tested,
                                                      const std::vector<MultiIndex>& marked,
                                                      const ImplicationFn& implies) {
    std::map<std::pair<int, int>, std::vector<MultiIndex>> by_pair;
    for (const auto& j : marked) by_pair[j.pair()].push_back(j);

    std::vector<ModelIndicator> out;
    for (auto& [pair, tests] : by_pair) {
        bool separated = false;
        for (const auto& [q, m] : tested)
            if (q.pair() == pair && m == Mark::Independent) separated = true;
        if (separated) continue;
        std::sort(tests.begin(), tests.end());
        MultiIndex current = tests.front();
        for (std::size_t i = 1; i < tests.size(); ++i)
            if (implies({current}, tests[i])) current = tests[i];
        out.push_back({static_cast<int>(out.size()), current, false});
    }
    return out;
}

IndicatorRepr represent_indicator(const std::vector<ModelIndicator>& model, const MultiIndex& j,
                                  const ImplicationFn& implies) {
    IndicatorRepr r;
    r.test = j;
    for (const auto& m : model)
        if (m.representor == j) {
            r.monomials = {{m.id}};
            return r;
        }

    const int k = static_cast<int>(model.size());
    if (k == 0) return r;
    if (k > 20) throw std::invalid_argument("represent_indicator: too many model indicators");
    int same_pair = -1;
    for (const auto& m : model)
        if (m.representor.pair() == j.pair()) {
            same_pair = m.id;
            break;
        }

    // candidates by degree, then lexicographic
    std::vector<std::vector<int>> cand;
    for (int deg = 1; deg <= k; ++deg) {
        std::vector<int> idx(deg);
        for (int i = 0; i < deg; ++i) idx[i] = i;
        while (true) {
            if (same_pair < 0 || std::find(idx.begin(), idx.end(), same_pair) != idx.end()) cand.push_back(idx);
            int i = deg - 1;
            while (i >= 0 && idx[i] == k - deg + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int t = i + 1; t < deg; ++t) idx[t] = idx[t - 1] + 1;
        }
    }
    std::vector<char> alive(cand.size(), 1);
    std::size_t remaining = cand.size();
    auto superset = [](const std::vector<int>& big, const std::vector<int>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };

    for (std::size_t c = 0; c < cand.size(); ++c) {
        if (!alive[c]) continue;
        if (remaining == 1 && r.monomials.empty()) {
            r.monomials.push_back(cand[c]);
            return r;
        }
        alive[c] = 0;
        --remaining;
        std::vector<MultiIndex> lhs;
        for (int id : cand[c]) lhs.push_back(model[id].representor);
        if (implies(lhs, j)) {
            for (std::size_t d = c + 1; d < cand.size(); ++d)
                if (alive[d] && superset(cand[d], cand[c])) {
                    alive[d] = 0;
                    --remaining;
                }
            r.monomials.push_back(cand[c]);
        }
    }
    return r;
}

StateTable construct_state_space(const std::vector<MultiIndex>& J_in, const StateContext& ctx) {
    StateTable t;
    t.marked = J_in;
    std::sort(t.marked.begin(), t.marked.end());
    t.marked.erase(std::unique(t.marked.begin(), t.marked.end()), t.marked.end());
    if (t.marked.empty()) {
        t.states.push_back({});
        t.values.push_back({});
        return t;
    }
    static const std::map<MultiIndex, Mark> kNone;
    const auto& tested = ctx.tested ? *ctx.tested : kNone;

    t.indicators = discover_model_indicators(tested, t.marked, ctx.implies);
    if (static_cast<int>(t.indicators.size()) > ctx.max_indicators) {
        t.conflicts.push_back("model indicator count " + std::to_string(t.indicators.size()) + " capped at " +
                              std::to_string(ctx.max_indicators));
        t.indicators.resize(ctx.max_indicators);
    }
    const auto base = t.indicators;

    for (const auto& j : t.marked) {
        IndicatorRepr r = represent_indicator(base, j, ctx.implies);
        if (r.monomials.empty()) {
            if (static_cast<int>(t.indicators.size()) < ctx.max_indicators) {
                int id = static_cast<int>(t.indicators.size());
                t.indicators.push_back({id, j, true});
                r.monomials = {{id}};
                t.conflicts.push_back("no representation for " + j.str() + "; promoted to indicator " +
                                      std::to_string(id));
            } else {
                t.conflicts.push_back("no representation for " + j.str() + "; treated as dependent");
            }
        }
        t.reprs.push_back(std::move(r));
    }

    const std::size_t k = t.indicators.size();
    for (std::size_t s = 0; s < (std::size_t{1} << k); ++s) {
        std::vector<std::uint8_t> b(k);
        for (std::size_t i = 0; i < k; ++i) b[i] = (s >> i) & 1;
        std::vector<std::uint8_t> v;
        for (const auto& r : t.reprs) v.push_back(r.eval(b) ? 1 : 0);
        t.states.push_back(std::move(b));
        t.values.push_back(std::move(v));
    }
    return t;
}

TransferResult transfer_orientations(const std::vector<Pdag>& per_state, const Pdag& union_graph) {
    TransferResult res;
    std::vector<Pdag> g;
    g.push_back(union_graph);
    g.insert(g.end(), per_state.begin(), per_state.end());
    const int n = union_graph.node_count();
    std::set<std::pair<int, int>> conflicts;

    bool changed = true;
    while (changed && res.rounds < 100) {
        changed = false;
        ++res.rounds;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                // +1: a -> b, -1: b -> a, 0: none known
                int mark = 0;
                if (g[0].directed(a, b)) mark = 1;
                else if (g[0].directed(b, a)) mark = -1;
                else {
                    bool fwd = false, bwd = false;
                    for (std::size_t i = 1; i < g.size(); ++i) {
                        fwd = fwd || g[i].directed(a, b);
                        bwd = bwd || g[i].directed(b, a);
                    }
                    if (fwd && bwd) conflicts.insert({a, b});
                    else mark = fwd ? 1 : (bwd ? -1 : 0);
                }
                if (mark == 0) continue;
                for (auto& gi : g) {
                    if (!gi.adjacent(a, b)) continue;
                    if (mark == 1 && !gi.directed(a, b)) {
                        if (gi.directed(b, a)) conflicts.insert({a, b});
                        gi.set_directed(a, b);
                        changed = true;
                    } else if (mark == -1 && !gi.directed(b, a)) {
                        if (gi.directed(a, b)) conflicts.insert({a, b});
                        gi.set_directed(b, a);
                        changed = true;
                    }
                }
            }
        for (auto& gi : g)
            if (meek_closure(gi) > 0) changed = true;
    }
    res.union_graph = g[0];
    res.states.assign(g.begin() + 1, g.end());
    res.conflicts.assign(conflicts.begin(), conflicts.end());
    return res;
}

nlohmann::json to_json(const StateTable& t) {
    nlohmann::json ind = nlohmann::json::array(), reprs = nlohmann::json::array(), states = nlohmann::json::array();
    for (const auto& m : t.indicators)
        ind.push_back({{"id", m.id}, {"representor", to_json(m.representor)}, {"fallback", m.fallback}});
    for (const auto& r : t.reprs) reprs.push_back({{"test", to_json(r.test)}, {"monomials", r.monomials}});
    for (std::size_t s = 0; s < t.states.size(); ++s) states.push_back(t.bits(s));
    return {{"indicators", ind}, {"representations", reprs}, {"states", states}, {"conflicts", t.conflicts}};
}

}  // namespace gld
