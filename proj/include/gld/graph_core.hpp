#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gld {

// CI query (x, y | z). Canonical form: x < y, z sorted, no duplicates.
struct MultiIndex {
    int x = 0;
    int y = 1;
    std::vector<int> z;

    static MultiIndex make(int a, int b, std::vector<int> cond = {});

    std::pair<int, int> pair() const { return {x, y}; }
    std::string str() const;

    bool operator==(const MultiIndex& o) const = default;
    // orders by |z| first, then lexicographically
    bool operator<(const MultiIndex& o) const;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& q) const;
};

class Dag {
public:
    Dag() = default;
    explicit Dag(int n);

    int node_count() const { return n_; }
    const std::vector<int>& parents(int v) const { return parents_.at(v); }
    const std::vector<std::vector<int>>& parent_sets() const { return parents_; }

    void add_edge(int from, int to);
    void remove_edge(int from, int to);
    bool has_edge(int from, int to) const;
    bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
    std::size_t edge_count() const;
    std::vector<std::pair<int, int>> edges() const;

    std::vector<std::vector<int>> children() const;
    // empty when cyclic
    std::vector<int> topological_order() const;
    bool acyclic() const;

    bool operator==(const Dag& o) const = default;

private:
    int n_ = 0;
    std::vector<std::vector<int>> parents_;
};

enum class EdgeMark { Undirected, AtoB, BtoA };

// Partially directed graph in amat form: arrow(a, b) means a mark pointing at b.
// a - b : arrow(a,b) && arrow(b,a); a -> b : arrow(a,b) only.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(int n);

    int node_count() const { return n_; }

    bool adjacent(int a, int b) const { return arrow(a, b) || arrow(b, a); }
    bool directed(int a, int b) const { return arrow(a, b) && !arrow(b, a); }
    bool undirected(int a, int b) const { return arrow(a, b) && arrow(b, a); }

    void add_undirected(int a, int b);
    void set_directed(int a, int b);
    void remove(int a, int b);

    std::vector<int> neighbors(int a) const;
    std::size_t edge_count() const;

    struct Edge {
        int a;
        int b;
        EdgeMark mark;
    };
    // a < b, ascending
    std::vector<Edge> edges() const;

    bool same_skeleton(const Pdag& o) const;
    bool operator==(const Pdag& o) const = default;
    bool operator<(const Pdag& o) const { return m_ < o.m_; }

    bool arrow(int a, int b) const { return m_[static_cast<std::size_t>(a) * n_ + b] != 0; }

private:
    void set(int a, int b, bool v) { m_[static_cast<std::size_t>(a) * n_ + b] = v ? 1 : 0; }

    int n_ = 0;
    std::vector<std::uint8_t> m_;
};

bool d_separated(const Dag& g, const MultiIndex& q);

Dag union_dag(const std::vector<Dag>& dags);

// Meek rules 1-4 to fixpoint, leaving edges in `keep` untouched. Returns number of edges oriented.
int meek_closure(Pdag& g, const std::vector<std::pair<int, int>>& keep = {});

Pdag cpdag_of(const Dag& g);

Pdag pdag_of(const Dag& g);

nlohmann::json to_json(const Pdag& g);
nlohmann::json to_json(const Dag& g);
nlohmann::json to_json(const MultiIndex& q);
Pdag pdag_from_json(const nlohmann::json& j);
Dag dag_from_json(const nlohmann::json& j);
MultiIndex multi_index_from_json(const nlohmann::json& j);

}  // namespace gld
