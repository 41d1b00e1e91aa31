#ifndef SNOE_EVAL_HPP_
#define SNOE_EVAL_HPP_

#include "snoe/graph.hpp"

namespace snoe {

enum class TruthKind { Dag, Cpdag };

// Confusion counts over unordered node pairs. tp requires the exact mark
// (undirected-vs-undirected is a tp only when the truth is a CPDAG);
// wrong_dir is a skeleton hit with the wrong mark; fp/fn are skeleton
// additions/deletions. shd = fp + fn + wrong_dir.
struct EvalReport {
    int tp = 0, fp = 0, fn = 0, wrong_dir = 0;
    int undirected_pred = 0;  // undirected edges in the prediction
    double f1 = 0.0;
    int shd = 0;
    TruthKind ground_truth_kind = TruthKind::Dag;
};

// f1 = 2 tp / (2 tp + fp + fn + 2 wrong_dir); 1 when all counts are zero.
double f1_from_counts(int tp, int fp, int fn, int wrong_dir);

EvalReport evaluate(const MixedGraph& predicted, const MixedGraph& truth, TruthKind truth_kind);

}  // namespace snoe

#endif  // SNOE_EVAL_HPP_
