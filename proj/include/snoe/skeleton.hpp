#ifndef SNOE_SKELETON_HPP_
#define SNOE_SKELETON_HPP_

#include <set>
#include <utility>

#include "snoe/dataset.hpp"
#include "snoe/graph_algo.hpp"

namespace snoe {

struct SkeletonOptions {
    int max_cond_size = 5;  // effective cap is min(p - 2, this)
};

// PC-stable edge removal at significance alpha starting from `start`
// (undirected). Conditioning sets are drawn from per-level frozen adjacency
// snapshots; the first separating subset found (smallest size, lexicographic
// order) is recorded.
std::pair<MixedGraph, SepsetTable> learn_skeleton(const DataMatrix& data, double alpha,
                                                  const MixedGraph& start,
                                                  const SkeletonOptions& opt = {});

struct InitialGraphResult {
    MixedGraph pdag;  // v-structures + Meek closure, candidates reinserted undirected
    std::set<std::pair<int, int>> candidate_edges;  // pairs kept at alpha2 but dropped at alpha1
    SepsetTable sepsets;
    double alpha1 = 0.0, alpha2 = 0.0;
    int vstructure_conflicts = 0;
};

// Stage 1: skeleton at the relaxed alpha2, continued removal at alpha1,
// v-structures + full Meek closure on the strict skeleton, candidate edges
// reinserted as undirected marks.
InitialGraphResult initial_pdag(const DataMatrix& data, double alpha1, double alpha2,
                                const SkeletonOptions& opt = {});

}  // namespace snoe

#endif  // SNOE_SKELETON_HPP_
