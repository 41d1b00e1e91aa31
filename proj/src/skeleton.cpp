#include "snoe/skeleton.hpp"

#include <algorithm>

#include "snoe/stats.hpp"

namespace snoe {

namespace {

// Lexicographic size-`k` subsets of `pool` (ascending index combinations);
// visit returns true to stop early.
template <typename F>
bool for_each_subset(const std::vector<int>& pool, int k, F&& visit) {
    const int m = static_cast<int>(pool.size());
    if (k > m) return false;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (visit(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int t = i + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
}

}  // namespace

std::pair<MixedGraph, SepsetTable> learn_skeleton(const DataMatrix& data, double alpha,
                                                  const MixedGraph& start,
                                                  const SkeletonOptions& opt) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("learn_skeleton: alpha must lie in (0,1)");
    const int p = data.p();
    if (start.num_nodes() != p) throw std::invalid_argument("learn_skeleton: start graph size mismatch");
    MixedGraph g = start;
    SepsetTable sepsets;
    const int cap = std::min(std::max(p - 2, 0), opt.max_cond_size);

    for (int level = 0; level <= cap; ++level) {
        // frozen adjacency snapshot for this level (PC-stable)
        std::vector<std::vector<int>> adj(p);
        bool any_big_enough = false;
        for (int i = 0; i < p; ++i) {
            adj[i] = g.neighbors(i);
            if (static_cast<int>(adj[i].size()) - 1 >= level) any_big_enough = true;
        }
        if (!any_big_enough) break;
        for (int i = 0; i < p; ++i) {
            for (int j : adj[i]) {
                if (!g.has_undirected(i, j)) continue;  // removed earlier this level
                std::vector<int> pool;
                for (int v : adj[i])
                    if (v != j) pool.push_back(v);
                if (static_cast<int>(pool.size()) < level) continue;
                for_each_subset(pool, level, [&](const std::vector<int>& S) {
                    CiTestResult r = fisher_z_test(data, i, j, S);
                    if (r.p_value > alpha) {
                        g.remove_edge(i, j);
                        sepsets.put(i, j, S);
                        return true;
                    }
                    return false;
                });
            }
        }
    }
    return {std::move(g), std::move(sepsets)};
}

InitialGraphResult initial_pdag(const DataMatrix& data, double alpha1, double alpha2,
                                const SkeletonOptions& opt) {
    if (!(alpha2 > alpha1)) throw std::invalid_argument("initial_pdag: requires alpha2 > alpha1");
    const int p = data.p();
    MixedGraph complete(data.labels);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) complete.set_undirected(i, j);

    auto [skel2, seps2] = learn_skeleton(data, alpha2, complete, opt);
    auto [skel1, seps1] = learn_skeleton(data, alpha1, skel2, opt);

    InitialGraphResult out;
    out.alpha1 = alpha1;
    out.alpha2 = alpha2;
    out.sepsets = std::move(seps2);
    out.sepsets.merge(seps1);

    for (auto [a, b] : skel2.undirected_edges())
        if (!skel1.adjacent(a, b)) out.candidate_edges.insert({a, b});

    MixedGraph orient = detect_v_structures(skel1, out.sepsets, &out.vstructure_conflicts);
    orient = meek_closure(std::move(orient));
    for (auto [a, b] : out.candidate_edges)
        if (!orient.adjacent(a, b)) orient.set_undirected(a, b);
    out.pdag = std::move(orient);
    return out;
}

}  // namespace snoe
