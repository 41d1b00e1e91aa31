#include "snoe/graph_algo.hpp"

#include <algorithm>
#include <stdexcept>

namespace snoe {

void SepsetTable::put(int i, int j, std::vector<int> s) {
    std::sort(s.begin(), s.end());
    table_[key(i, j)] = std::move(s);
}

bool SepsetTable::contains(int i, int j) const { return table_.count(key(i, j)) > 0; }

const std::vector<int>& SepsetTable::get(int i, int j) const {
    auto it = table_.find(key(i, j));
    if (it == table_.end())
        throw std::out_of_range("SepsetTable: no separating set recorded for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return it->second;
}

void SepsetTable::merge(const SepsetTable& other) {
    for (const auto& [k, v] : other.table_) table_[k] = v;
}

MixedGraph detect_v_structures(const MixedGraph& skeleton, const SepsetTable& sepsets, int* conflicts) {
    const int p = skeleton.num_nodes();
    MixedGraph g = skeleton;
    auto try_orient = [&](int a, int b) {
        if (g.has_directed(a, b)) return;
        if (g.has_directed(b, a) || !g.orient(a, b)) {
            if (conflicts) ++(*conflicts);
        }
    };
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (skeleton.adjacent(i, j)) continue;
            for (int k = 0; k < p; ++k) {
                if (k == i || k == j) continue;
                if (!skeleton.adjacent(i, k) || !skeleton.adjacent(j, k)) continue;
                const auto& s = sepsets.get(i, j);  // throws if the pair was never separated
                if (std::binary_search(s.begin(), s.end(), k)) continue;
                try_orient(i, k);
                try_orient(j, k);
            }
        }
    }
    return g;
}

std::set<std::tuple<int, int, int>> v_structures_of(const MixedGraph& g) {
    std::set<std::tuple<int, int, int>> out;
    const int p = g.num_nodes();
    for (int k = 0; k < p; ++k) {
        auto pa = g.parents(k);
        for (std::size_t a = 0; a < pa.size(); ++a)
            for (std::size_t b = a + 1; b < pa.size(); ++b)
                if (!g.adjacent(pa[a], pa[b])) out.emplace(pa[a], k, pa[b]);
    }
    return out;
}

namespace {

// One deterministic pass of the selected rules over undirected pairs in
// ascending (a, b) order; returns whether any mark changed.
bool meek_pass(MixedGraph& g, const std::array<bool, 4>& rules) {
    const int p = g.num_nodes();
    bool changed = false;
    auto direct = [&](int a, int b) {
        if (g.orient(a, b)) { changed = true; return true; }
        return false;
    };
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
            if (a == b || !g.has_undirected(a, b)) continue;
            // R1: c->a, a-b, c and b non-adjacent  =>  a->b
            if (rules[0]) {
                bool fired = false;
                for (int c = 0; c < p && !fired; ++c) {
                    if (c == a || c == b) continue;
                    if (g.has_directed(c, a) && !g.adjacent(c, b)) fired = direct(a, b);
                }
                if (fired) continue;
            }
            // R2: a->c->b with a-b  =>  a->b
            if (rules[1]) {
                bool fired = false;
                for (int c = 0; c < p && !fired; ++c) {
                    if (c == a || c == b) continue;
                    if (g.has_directed(a, c) && g.has_directed(c, b)) fired = direct(a, b);
                }
                if (fired) continue;
            }
            // R3: a-c, a-d, c->b, d->b, c and d non-adjacent  =>  a->b
            if (rules[2]) {
                bool fired = false;
                for (int c = 0; c < p && !fired; ++c) {
                    if (c == a || c == b || !g.has_undirected(a, c) || !g.has_directed(c, b)) continue;
                    for (int d = c + 1; d < p && !fired; ++d) {
                        if (d == a || d == b || !g.has_undirected(a, d) || !g.has_directed(d, b)) continue;
                        if (!g.adjacent(c, d)) fired = direct(a, b);
                    }
                }
                if (fired) continue;
            }
            // R4: a-c, c->d, d->b, c and b non-adjacent, a and d adjacent  =>  a->b
            if (rules[3]) {
                bool fired = false;
                for (int c = 0; c < p && !fired; ++c) {
                    if (c == a || c == b || !g.has_undirected(a, c) || g.adjacent(c, b)) continue;
                    for (int d = 0; d < p && !fired; ++d) {
                        if (d == a || d == b || d == c) continue;
                        if (g.has_directed(c, d) && g.has_directed(d, b) && g.adjacent(a, d)) fired = direct(a, b);
                    }
                }
                if (fired) continue;
            }
        }
    }
    return changed;
}

}  // namespace

bool meek_rule1(MixedGraph& g) { return meek_pass(g, {true, false, false, false}); }

MixedGraph meek_closure(MixedGraph g, const std::array<bool, 4>& rules) {
    while (meek_pass(g, rules)) {}
    return g;
}

void orient_common_nc(MixedGraph& g, int i, int j, int* conflicts) {
    auto nci = g.nc(i);
    auto ncj = g.nc(j);
    std::vector<int> common;
    std::set_intersection(nci.begin(), nci.end(), ncj.begin(), ncj.end(), std::back_inserter(common));
    for (int k : common) {
        for (int src : {i, j}) {
            if (g.has_directed(src, k)) continue;
            if (!g.orient(src, k) && conflicts) ++(*conflicts);
        }
    }
}

MixedGraph cpdag_of_dag(const MixedGraph& dag) {
    if (!dag.is_dag()) throw std::invalid_argument("cpdag_of_dag: input is not a DAG");
    const int p = dag.num_nodes();
    MixedGraph g(dag.labels());
    for (auto [u, v] : dag.directed_edges()) g.set_undirected(u, v);
    for (int k = 0; k < p; ++k) {
        auto pa = dag.parents(k);
        for (std::size_t a = 0; a < pa.size(); ++a)
            for (std::size_t b = a + 1; b < pa.size(); ++b)
                if (!dag.adjacent(pa[a], pa[b])) {
                    (void)g.orient(pa[a], k);
                    (void)g.orient(pa[b], k);
                }
    }
    return meek_closure(std::move(g));
}

std::vector<std::vector<int>> undirected_components(const MixedGraph& g) {
    const int p = g.num_nodes();
    std::vector<int> comp(p, -1);
    int nc_count = 0;
    for (int s = 0; s < p; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = nc_count;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : g.neighbors(u))
                if (comp[v] == -1) { comp[v] = nc_count; stack.push_back(v); }
        }
        ++nc_count;
    }
    std::vector<std::vector<int>> groups(nc_count);
    for (int i = 0; i < p; ++i) groups[comp[i]].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& grp : groups)
        if (grp.size() > 1) out.push_back(std::move(grp));
    return out;
}

std::optional<MixedGraph> extend_to_dag(const MixedGraph& g) {
    const int p = g.num_nodes();
    MixedGraph work = g;
    MixedGraph result = g;
    std::vector<char> removed(p, 0);
    for (int step = 0; step < p; ++step) {
        int sink = -1;
        for (int x = 0; x < p && sink < 0; ++x) {
            if (removed[x]) continue;
            if (!work.children(x).empty()) continue;  // needs no outgoing directed edges
            // every undirected neighbor of x must be adjacent to all other adjacent nodes of x
            auto ne = work.neighbors(x);
            auto adj = work.adjacency(x);
            bool ok = true;
            for (int y : ne) {
                for (int z : adj) {
                    if (z == y) continue;
                    if (!work.adjacent(y, z)) { ok = false; break; }
                }
                if (!ok) break;
            }
            if (ok) sink = x;
        }
        if (sink < 0) {
            // nodes with edges remain but no eliminable sink exists
            bool any_left = false;
            for (int x = 0; x < p; ++x)
                if (!removed[x] && !work.adjacency(x).empty()) any_left = true;
            if (!any_left) break;
            return std::nullopt;
        }
        for (int y : work.neighbors(sink)) {
            if (!result.orient(y, sink)) return std::nullopt;
        }
        for (int y : work.adjacency(sink)) work.remove_edge(y, sink);
        removed[sink] = 1;
    }
    if (!result.is_dag()) return std::nullopt;
    return result;
}

bool d_separated(const MixedGraph& dag, int i, int j, const std::vector<int>& S) {
    const int p = dag.num_nodes();
    std::vector<char> in_s(p, 0);
    for (int s : S) in_s[s] = 1;
    if (i == j || in_s[i] || in_s[j]) throw std::invalid_argument("d_separated: endpoints must be distinct and outside S");

    // ancestors of S (inclusive), for collider activation
    std::vector<char> anc(p, 0);
    {
        std::vector<int> stack(S.begin(), S.end());
        for (int s : S) anc[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : dag.parents(u))
                if (!anc[v]) { anc[v] = 1; stack.push_back(v); }
        }
    }

    // reachability over (node, arrived-by) states; arrived 0 = via edge into
    // node (from a parent), 1 = via edge out of node (from a child)
    std::vector<std::array<char, 2>> seen(p, {0, 0});
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int v, int dir) {
        if (!seen[v][dir]) { seen[v][dir] = 1; stack.emplace_back(v, dir); }
    };
    for (int c : dag.children(i)) push(c, 0);
    for (int par : dag.parents(i)) push(par, 1);
    while (!stack.empty()) {
        auto [u, dir] = stack.back();
        stack.pop_back();
        if (u == j) return false;
        if (dir == 0) {            // entered via an arrow into u (chain/collider position)
            if (!in_s[u]) {
                for (int c : dag.children(u)) push(c, 0);   // chain continues
            }
            if (anc[u]) {
                for (int par : dag.parents(u)) push(par, 1);  // collider opened by S
            }
        } else {                   // entered against an arrow (u is a parent on the trail)
            if (!in_s[u]) {
                for (int c : dag.children(u)) push(c, 0);   // fork
                for (int par : dag.parents(u)) push(par, 1);
            }
        }
    }
    return true;
}

}  // namespace snoe
