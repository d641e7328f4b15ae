#include "gld/cd_engine.hpp"

#include <algorithm>
#include <set>

namespace gld {

const std::vector<int>* Skeleton::sepset(int a, int b) const {
    auto it = sepsets.find({std::min(a, b), std::max(a, b)});
    return it == sepsets.end() ? nullptr : &it->second;
}

namespace {

// calls f on every size-k subset of pool (lexicographic); stops when f returns true
template <class F>
bool for_each_subset(const std::vector<int>& pool, int k, F&& f) {
    const int m = static_cast<int>(pool.size());
    if (k > m) return false;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> sub(k);
    while (true) {
        for (int i = 0; i < k; ++i) sub[i] = pool[idx[i]];
        if (f(sub)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

Skeleton pc_stable_skeleton(const CitFn& cit, int n, int max_cond, std::vector<MultiIndex>* log) {
    Skeleton s;
    s.node_count = n;
    s.adj.assign(n, std::vector<char>(n, 1));
    for (int v = 0; v < n; ++v) s.adj[v][v] = 0;
    if (max_cond < 0) max_cond = std::max(0, n - 2);

    for (int level = 0; level <= max_cond; ++level) {
        // frozen adjacencies for this level
        std::vector<std::vector<int>> frozen(n);
        bool any = false;
        for (int v = 0; v < n; ++v) {
            for (int w = 0; w < n; ++w)
                if (s.adj[v][w]) frozen[v].push_back(w);
            if (static_cast<int>(frozen[v].size()) - 1 >= level) any = true;
        }
        if (!any) break;

        for (int x = 0; x < n; ++x) {
            for (int y : frozen[x]) {
                if (!s.adj[x][y]) continue;
                std::vector<int> pool;
                for (int w : frozen[x])
                    if (w != y) pool.push_back(w);
                if (static_cast<int>(pool.size()) < level) continue;
                for_each_subset(pool, level, [&](const std::vector<int>& cond) {
                    MultiIndex q = MultiIndex::make(x, y, cond);
                    if (log) log->push_back(q);
                    if (cit(q)) {
                        s.adj[x][y] = s.adj[y][x] = 0;
                        s.sepsets[{q.x, q.y}] = q.z;
                        return true;
                    }
                    return false;
                });
            }
        }
    }
    return s;
}

OrientResult orient(const Skeleton& skel) {
    const int n = skel.node_count;
    OrientResult r;
    r.graph = Pdag(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (skel.adjacent(a, b)) r.graph.add_undirected(a, b);

    // requested arrowheads: want[a][b] = some triple asks a -> b
    std::vector<std::vector<char>> want(n, std::vector<char>(n, 0));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a) {
            if (a == c || !skel.adjacent(a, c)) continue;
            for (int b = a + 1; b < n; ++b) {
                if (b == c || !skel.adjacent(b, c) || skel.adjacent(a, b)) continue;
                const auto* sep = skel.sepset(a, b);
                if (sep && std::find(sep->begin(), sep->end(), c) != sep->end()) continue;
                want[a][c] = 1;
                want[b][c] = 1;
            }
        }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!skel.adjacent(a, b)) continue;
            if (want[a][b] && want[b][a]) r.conflicts.emplace_back(a, b);
            else if (want[a][b]) r.graph.set_directed(a, b);
            else if (want[b][a]) r.graph.set_directed(b, a);
        }
    meek_closure(r.graph, r.conflicts);
    return r;
}

CdResult run_cd(const CitFn& cit, int n, const CdOptions& opts) {
    CdResult res;
    std::vector<MultiIndex> log;
    res.skeleton = pc_stable_skeleton(cit, n, opts.max_cond_size, &log);
    std::set<MultiIndex> seen;
    for (auto& q : log)
        if (seen.insert(q).second) res.queries.push_back(q);
    auto o = orient(res.skeleton);
    res.graph = std::move(o.graph);
    res.conflicts = std::move(o.conflicts);
    return res;
}

}  // namespace gld
