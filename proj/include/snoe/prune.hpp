#ifndef SNOE_PRUNE_HPP_
#define SNOE_PRUNE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "snoe/orientation.hpp"

namespace snoe {

// One edge examined during pruning. Undirected entries carry from < to and
// the smaller of the two endpoint-model p-values (removal requires both to
// exceed alpha). p_value < 0 marks an edge whose term was screened out
// before fitting and therefore never tested.
struct PrunedEdge {
    int from = -1, to = -1;
    bool undirected = false;
    double p_value = 1.0;
};

struct PruneReport {
    double alpha_prune = 1e-4;
    std::vector<PrunedEdge> removed;
    std::vector<PrunedEdge> kept;
    std::vector<std::pair<int, int>> oriented;  // undirected pairs settled by one-sided significance
    std::vector<int> screened_nodes;            // nodes whose predictor pool was capped
    std::vector<std::string> warnings;
};

// Covariate-selection pruning: each node is regressed on its parents and
// undirected neighbors with an additive spline model; an incoming directed
// edge is dropped when its term p-value exceeds alpha_prune. An undirected
// pair is oriented j->i when only node i finds it significant, removed when
// neither does, and kept otherwise. One pass, node fits independent of edit
// order. Pools larger than n/10 predictors are cut to the strongest by
// absolute marginal correlation.
std::pair<MixedGraph, PruneReport> prune_edges(const DataMatrix& data, const MixedGraph& g,
                                               double alpha_prune);

// Force a DAG: rerun orient_edges, then settle each remaining undirected
// edge by the sign of its likelihood-ratio statistic regardless of
// significance (cycle-closing directions flipped). Any edge still undirected
// afterwards goes through consistent extension; when even that fails the
// residual undirected edges are returned as-is.
MixedGraph refine_to_dag(const DataMatrix& data, const MixedGraph& g, const OrientOptions& opt,
                         const SplitIdx& split, OrientTrace* trace = nullptr);

}  // namespace snoe

#endif  // SNOE_PRUNE_HPP_
