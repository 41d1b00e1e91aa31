#ifndef SNOE_GRAPH_ALGO_HPP_
#define SNOE_GRAPH_ALGO_HPP_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "snoe/graph.hpp"

namespace snoe {

// Separating sets recorded while removing edges during skeleton learning.
class SepsetTable {
public:
    void put(int i, int j, std::vector<int> s);
    bool contains(int i, int j) const;
    // Throws std::out_of_range when no entry exists for the pair.
    const std::vector<int>& get(int i, int j) const;
    const std::map<std::pair<int, int>, std::vector<int>>& entries() const { return table_; }
    void merge(const SepsetTable& other);  // other's entries win on collision

private:
    static std::pair<int, int> key(int i, int j) { return i < j ? std::make_pair(i, j) : std::make_pair(j, i); }
    std::map<std::pair<int, int>, std::vector<int>> table_;
};

// Orient i->k<-j for every skeleton path i-k-j with i,j non-adjacent and
// k not in the recorded sepset of (i,j). Conflicting demands keep the first
// orientation written; each skipped write bumps *conflicts (if given).
MixedGraph detect_v_structures(const MixedGraph& skeleton, const SepsetTable& sepsets, int* conflicts = nullptr);

// Colliders (i, k, j) with i < j, i->k<-j, i and j non-adjacent.
std::set<std::tuple<int, int, int>> v_structures_of(const MixedGraph& g);

// Meek's rules, applied to edges scanned in ascending (i, j) order until a
// full pass changes nothing. `rules` selects which of R1..R4 run.
bool meek_rule1(MixedGraph& g);  // single pass; true if anything oriented
MixedGraph meek_closure(MixedGraph g, const std::array<bool, 4>& rules = {true, true, true, true});

// Propagation after orienting i->j: every k in nc(i) & nc(j) gets i->k and
// j->k (existing directed marks kept; cycle-closing writes counted as
// conflicts).
void orient_common_nc(MixedGraph& g, int i, int j, int* conflicts = nullptr);

// CPDAG of a DAG: skeleton + v-structures + full Meek closure.
MixedGraph cpdag_of_dag(const MixedGraph& dag);

// Connected components of the undirected subgraph, singletons omitted,
// each sorted ascending, components ordered by smallest member.
std::vector<std::vector<int>> undirected_components(const MixedGraph& g);

// Consistent extension via sink elimination; nullopt when not extendable.
std::optional<MixedGraph> extend_to_dag(const MixedGraph& g);

// d-separation of i and j given S in a DAG (reachability formulation).
bool d_separated(const MixedGraph& dag, int i, int j, const std::vector<int>& S);

}  // namespace snoe

#endif  // SNOE_GRAPH_ALGO_HPP_
