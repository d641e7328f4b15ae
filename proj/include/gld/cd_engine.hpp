#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "gld/graph_core.hpp"

namespace gld {

// returns true when the query is judged independent
using CitFn = std::function<bool(const MultiIndex&)>;

struct Skeleton {
    int node_count = 0;
    std::vector<std::vector<char>> adj;
    std::map<std::pair<int, int>, std::vector<int>> sepsets;  // key (a<b)

    bool adjacent(int a, int b) const { return adj[a][b] != 0; }
    const std::vector<int>* sepset(int a, int b) const;
};

Skeleton pc_stable_skeleton(const CitFn& cit, int node_count, int max_cond_size = -1,
                            std::vector<MultiIndex>* query_log = nullptr);

struct OrientResult {
    Pdag graph;
    std::vector<std::pair<int, int>> conflicts;
};

OrientResult orient(const Skeleton& skel);

struct CdOptions {
    int max_cond_size = -1;  // -1: node_count - 2
};

struct CdResult {
    Pdag graph;
    Skeleton skeleton;
    std::vector<MultiIndex> queries;  // in issue order, duplicates removed
    std::vector<std::pair<int, int>> conflicts;
};

CdResult run_cd(const CitFn& cit, int node_count, const CdOptions& opts = {});

}  // namespace gld
