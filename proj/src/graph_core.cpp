#include "gld/graph_core.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace gld {

MultiIndex MultiIndex::make(int a, int b, std::vector<int> cond) {
    if (a == b) throw std::invalid_argument("multi-index: x == y");
    MultiIndex q;
    q.x = std::min(a, b);
    q.y = std::max(a, b);
    std::sort(cond.begin(), cond.end());
    cond.erase(std::unique(cond.begin(), cond.end()), cond.end());
    for (int v : cond)
        if (v == a || v == b) throw std::invalid_argument("multi-index: z contains x or y");
    q.z = std::move(cond);
    return q;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << x << "," << y << "|";
    for (std::size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
    return os.str();
}

bool MultiIndex::operator<(const MultiIndex& o) const {
    if (z.size() != o.z.size()) return z.size() < o.z.size();
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& q) const {
    std::size_t h = static_cast<std::size_t>(q.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::size_t>(q.y) + 0x7F4A7C15ULL + (h << 6) + (h >> 2);
    for (int v : q.z) h ^= static_cast<std::size_t>(v) + 0x9E3779B9ULL + (h << 6) + (h >> 2);
    return h;
}

Dag::Dag(int n) : n_(n), parents_(static_cast<std::size_t>(n)) {
    if (n < 0) throw std::invalid_argument("dag: negative node count");
}

void Dag::add_edge(int from, int to) {
    if (from < 0 || to < 0 || from >= n_ || to >= n_) throw std::out_of_range("dag: node index");
    if (from == to) throw std::invalid_argument("dag: self loop");
    auto& p = parents_[to];
    auto it = std::lower_bound(p.begin(), p.end(), from);
    if (it == p.end() || *it != from) p.insert(it, from);
}

void Dag::remove_edge(int from, int to) {
    auto& p = parents_.at(to);
    auto it = std::lower_bound(p.begin(), p.end(), from);
    if (it != p.end() && *it == from) p.erase(it);
}

bool Dag::has_edge(int from, int to) const {
    const auto& p = parents_.at(to);
    return std::binary_search(p.begin(), p.end(), from);
}

std::size_t Dag::edge_count() const {
    std::size_t k = 0;
    for (const auto& p : parents_) k += p.size();
    return k;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < n_; ++v)
        for (int p : parents_[v]) out.emplace_back(p, v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> Dag::children() const {
    std::vector<std::vector<int>> ch(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v)
        for (int p : parents_[v]) ch[p].push_back(v);
    return ch;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indeg(n_);
    for (int v = 0; v < n_; ++v) indeg[v] = static_cast<int>(parents_[v].size());
    auto ch = children();
    std::vector<int> order;
    std::deque<int> ready;
    for (int v = 0; v < n_; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int c : ch[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    if (static_cast<int>(order.size()) != n_) return {};
    return order;
}

bool Dag::acyclic() const { return n_ == 0 || !topological_order().empty(); }

Pdag::Pdag(int n) : n_(n), m_(static_cast<std::size_t>(n) * n, 0) {}

void Pdag::add_undirected(int a, int b) {
    if (a == b) throw std::invalid_argument("pdag: self loop");
    set(a, b, true);
    set(b, a, true);
}

void Pdag::set_directed(int a, int b) {
    if (a == b) throw std::invalid_argument("pdag: self loop");
    set(a, b, true);
    set(b, a, false);
}

void Pdag::remove(int a, int b) {
    set(a, b, false);
    set(b, a, false);
}

std::vector<int> Pdag::neighbors(int a) const {
    std::vector<int> out;
    for (int b = 0; b < n_; ++b)
        if (b != a && adjacent(a, b)) out.push_back(b);
    return out;
}

std::size_t Pdag::edge_count() const {
    std::size_t k = 0;
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
            if (adjacent(a, b)) ++k;
    return k;
}

std::vector<Pdag::Edge> Pdag::edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b) {
            if (!adjacent(a, b)) continue;
            EdgeMark m = undirected(a, b) ? EdgeMark::Undirected
                                          : (arrow(a, b) ? EdgeMark::AtoB : EdgeMark::BtoA);
            out.push_back({a, b, m});
        }
    return out;
}

bool Pdag::same_skeleton(const Pdag& o) const {
    if (n_ != o.n_) return false;
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
            if (adjacent(a, b) != o.adjacent(a, b)) return false;
    return true;
}

bool d_separated(const Dag& g, const MultiIndex& q) {
    const int n = g.node_count();
    auto in_range = [n](int v) { return v >= 0 && v < n; };
    if (!in_range(q.x) || !in_range(q.y)) throw std::out_of_range("d_separated: node index");
    std::vector<char> inz(n, 0);
    for (int v : q.z) {
        if (!in_range(v)) throw std::out_of_range("d_separated: node index");
        inz[v] = 1;
    }

    // ancestors of z (including z)
    std::vector<char> anc(n, 0);
    std::vector<int> stack(q.z.begin(), q.z.end());
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (anc[v]) continue;
        anc[v] = 1;
        for (int p : g.parents(v)) stack.push_back(p);
    }

    auto ch = g.children();
    // 0: arrived from a child (moving up), 1: arrived from a parent (moving down)
    std::vector<char> seen(static_cast<std::size_t>(n) * 2, 0);
    std::vector<std::pair<int, int>> todo{{q.x, 0}};
    while (!todo.empty()) {
        auto [v, dir] = todo.back();
        todo.pop_back();
        if (seen[v * 2 + dir]) continue;
        seen[v * 2 + dir] = 1;
        if (!inz[v] && v == q.y) return false;
        if (dir == 0) {
            if (inz[v]) continue;
            for (int p : g.parents(v)) todo.emplace_back(p, 0);
            for (int c : ch[v]) todo.emplace_back(c, 1);
        } else {
            if (!inz[v])
                for (int c : ch[v]) todo.emplace_back(c, 1);
            if (anc[v])
                for (int p : g.parents(v)) todo.emplace_back(p, 0);
        }
    }
    return true;
}

Dag union_dag(const std::vector<Dag>& dags) {
    if (dags.empty()) return Dag(0);
    Dag out(dags.front().node_count());
    for (const auto& d : dags) {
        if (d.node_count() != out.node_count()) throw std::invalid_argument("union_dag: node count mismatch");
        for (auto [a, b] : d.edges()) out.add_edge(a, b);
    }
    if (!out.acyclic()) throw std::invalid_argument("union_dag: union is cyclic");
    return out;
}

namespace {

bool rule1(const Pdag& g, int a, int b) {
    for (int c = 0; c < g.node_count(); ++c)
        if (c != b && g.directed(c, a) && !g.adjacent(c, b)) return true;
    return false;
}

bool rule2(const Pdag& g, int a, int b) {
    for (int c = 0; c < g.node_count(); ++c)
        if (g.directed(a, c) && g.directed(c, b)) return true;
    return false;
}

bool rule3(const Pdag& g, int a, int b) {
    const int n = g.node_count();
    for (int c = 0; c < n; ++c) {
        if (c == b || !g.undirected(a, c) || !g.directed(c, b)) continue;
        for (int d = c + 1; d < n; ++d)
            if (d != b && g.undirected(a, d) && g.directed(d, b) && !g.adjacent(c, d)) return true;
    }
    return false;
}

bool rule4(const Pdag& g, int a, int b) {
    const int n = g.node_count();
    for (int d = 0; d < n; ++d) {
        if (d == b || !g.undirected(a, d) || g.adjacent(d, b)) continue;
        for (int c = 0; c < n; ++c)
            if (c != a && c != b && g.directed(d, c) && g.directed(c, b) && g.adjacent(a, c)) return true;
    }
    return false;
}

}  // namespace

int meek_closure(Pdag& g, const std::vector<std::pair<int, int>>& keep) {
    const int n = g.node_count();
    auto kept = [&](int a, int b) {
        for (auto [u, v] : keep)
            if ((u == a && v == b) || (u == b && v == a)) return true;
        return false;
    };
    int oriented = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b || !g.undirected(a, b) || kept(a, b)) continue;
                if (rule1(g, a, b) || rule2(g, a, b) || rule3(g, a, b) || rule4(g, a, b)) {
                    g.set_directed(a, b);
                    ++oriented;
                    changed = true;
                }
            }
    }
    return oriented;
}

Pdag pdag_of(const Dag& g) {
    Pdag p(g.node_count());
    for (auto [a, b] : g.edges()) p.set_directed(a, b);
    return p;
}

Pdag cpdag_of(const Dag& g) {
    const int n = g.node_count();
    Pdag p(n);
    for (auto [a, b] : g.edges()) p.add_undirected(a, b);
    for (int c = 0; c < n; ++c) {
        const auto& pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j)
                if (!g.adjacent(pa[i], pa[j])) {
                    p.set_directed(pa[i], c);
                    p.set_directed(pa[j], c);
                }
    }
    meek_closure(p);
    return p;
}

nlohmann::json to_json(const Pdag& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) {
        switch (e.mark) {
            case EdgeMark::Undirected: edges.push_back({{"from", e.a}, {"to", e.b}, {"mark", "undirected"}}); break;
            case EdgeMark::AtoB: edges.push_back({{"from", e.a}, {"to", e.b}, {"mark", "directed"}}); break;
            case EdgeMark::BtoA: edges.push_back({{"from", e.b}, {"to", e.a}, {"mark", "directed"}}); break;
        }
    }
    return {{"nodes", g.node_count()}, {"edges", edges}};
}

nlohmann::json to_json(const Dag& g) { return to_json(pdag_of(g)); }

nlohmann::json to_json(const MultiIndex& q) { return {{"x", q.x}, {"y", q.y}, {"z", q.z}}; }

Pdag pdag_from_json(const nlohmann::json& j) {
    Pdag g(j.at("nodes").get<int>());
    for (const auto& e : j.at("edges")) {
        int a = e.at("from").get<int>(), b = e.at("to").get<int>();
        if (a < 0 || b < 0 || a >= g.node_count() || b >= g.node_count()) throw std::out_of_range("graph json: node index");
        if (g.adjacent(a, b)) throw std::invalid_argument("graph json: duplicate edge");
        std::string m = e.value("mark", "directed");
        if (m == "directed") g.set_directed(a, b);
        else if (m == "undirected") g.add_undirected(a, b);
        else throw std::invalid_argument("graph json: unknown mark " + m);
    }
    return g;
}

Dag dag_from_json(const nlohmann::json& j) {
    Dag g(j.at("nodes").get<int>());
    for (const auto& e : j.at("edges")) {
        if (e.value("mark", "directed") != "directed") throw std::invalid_argument("dag json: undirected edge");
        g.add_edge(e.at("from").get<int>(), e.at("to").get<int>());
    }
    if (!g.acyclic()) throw std::invalid_argument("dag json: cyclic");
    return g;
}

MultiIndex multi_index_from_json(const nlohmann::json& j) {
    return MultiIndex::make(j.at("x").get<int>(), j.at("y").get<int>(), j.at("z").get<std::vector<int>>());
}

}  // namespace gld
