#ifndef SNOE_ORIENTATION_HPP_
#define SNOE_ORIENTATION_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snoe/dataset.hpp"
#include "snoe/graph_algo.hpp"

namespace snoe {

enum class LrtVariant { SS, CV };
enum class RankingMode { Partitioned, Global };

struct OrientOptions {
    double alpha = 0.05;
    LrtVariant variant = LrtVariant::CV;
    double delta = 0.02;  // variance-test threshold, calibrated on linear-Gaussian nulls
    RankingMode ranking = RankingMode::Partitioned;
    bool meek_all_in_loop = false;  // default: rule 1 inside the loop, all rules at the end
};

struct EdgeScore {
    int i = -1, j = -1;  // i < j
    double i_fwd = 0.0;  // dependence left behind by fitting i -> j
    double i_bwd = 0.0;  // and by fitting j -> i
    double score = 0.0;  // min of the two
    int shared_neighbors = 0;
};

enum class LrtDecision { Forward, Backward, Undirected, Indistinguishable };

struct FoldStat {
    double stat = 0.0;
    double p_value = 1.0;
};

struct LrtOutcome {
    LrtDecision decision = LrtDecision::Undirected;
    double lr_stat = 0.0;         // LR_n / (sqrt(n_test) * omega_n)
    double p_value = 1.0;
    double variance_ratio = 0.0;  // omega_n^2 / v^2
    std::optional<std::pair<FoldStat, FoldStat>> per_fold;  // CV only
    std::string note;             // nonempty when a regression failure aborted the test
};

// Residual–covariate dependence of the orientation i -> j: fit x_i on pa(i)
// and x_j on pa(j) u {i} over the training rows, then take the largest
// normalized MI between a test-half residual and any covariate of its model.
// An empty covariate pool contributes 0.
double directional_dependence(const DataMatrix& data, const SplitIdx& split, const MixedGraph& g,
                              int i, int j);

// Scores for undirected edges, ordered for evaluation: partitioned mode
// sorts by (shared undirected neighbors, score, i, j); global mode ignores
// the neighbor count.
std::vector<EdgeScore> rank_edges(const DataMatrix& data, const SplitIdx& split, const MixedGraph& g,
                                  const std::vector<std::pair<int, int>>& edges,
                                  RankingMode mode = RankingMode::Partitioned);

// Vuong-style orientation test of the undirected edge i - j with parent sets
// read from g. Forward means i -> j.
LrtOutcome likelihood_test(const DataMatrix& data, const SplitIdx& split, const MixedGraph& g,
                           int i, int j, double alpha, LrtVariant variant, double delta = 0.02);

struct OrientTrace {
    int oriented_by_test = 0;
    int oriented_by_propagation = 0;  // common-nc rule plus Meek closures
    int conflicts = 0;
    int tests_run = 0;
    int indistinguishable = 0;
};

// Sequential orientation of the undirected edges of g (shared-neighbor
// strata, ranked within stratum, LRT per edge, propagation after each
// success). Never adds or removes skeleton edges.
MixedGraph orient_edges(const DataMatrix& data, const MixedGraph& g, const OrientOptions& opt,
                        const SplitIdx& split, OrientTrace* trace = nullptr);

// Population-level loop: oracles stand in for the ranking measure and the
// orientation test. panm(g, i, j) answers whether the pair with its current
// parent sets satisfies the pairwise-ANM condition; direction(i, j) answers
// whether i -> j holds in the hidden true DAG. Throws std::logic_error if
// undirected edges remain but no pair satisfies the criterion.
MixedGraph sequential_orientation_oracle(const MixedGraph& cpdag,
                                         const std::function<bool(const MixedGraph&, int, int)>& panm,
                                         const std::function<bool(int, int)>& direction);

}  // namespace snoe

#endif  // SNOE_ORIENTATION_HPP_
