#include "snoe/eval.hpp"

#include <stdexcept>

namespace snoe {

double f1_from_counts(int tp, int fp, int fn, int wrong_dir) {
    double denom = 2.0 * tp + fp + fn + 2.0 * wrong_dir;
    return denom > 0.0 ? 2.0 * tp / denom : 1.0;
}

EvalReport evaluate(const MixedGraph& predicted, const MixedGraph& truth, TruthKind truth_kind) {
    if (predicted.labels() != truth.labels())
        throw std::invalid_argument("evaluate: graphs must share the same node set in the same order");
    if (truth_kind == TruthKind::Dag && !truth.is_dag())
        throw std::invalid_argument("evaluate: truth is not a DAG");
    if (truth_kind == TruthKind::Cpdag && !truth.directed_part_acyclic())
        throw std::invalid_argument("evaluate: truth has a cyclic directed part");

    EvalReport r;
    r.ground_truth_kind = truth_kind;
    const int p = truth.num_nodes();
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            bool t_adj = truth.adjacent(i, j);
            bool p_adj = predicted.adjacent(i, j);
            if (!t_adj && !p_adj) continue;
            if (!t_adj) { r.fp++; continue; }
            if (!p_adj) { r.fn++; continue; }
            bool t_und = truth.has_undirected(i, j);
            bool p_und = predicted.has_undirected(i, j);
            if (t_und && p_und) {
                if (truth_kind == TruthKind::Cpdag) r.tp++; else r.wrong_dir++;
            } else if (!t_und && !p_und) {
                bool same = truth.has_directed(i, j) == predicted.has_directed(i, j);
                if (same) r.tp++; else r.wrong_dir++;
            } else {
                r.wrong_dir++;
            }
        }
    }
    r.undirected_pred = predicted.undirected_edge_count();
    r.f1 = f1_from_counts(r.tp, r.fp, r.fn, r.wrong_dir);
    r.shd = r.fp + r.fn + r.wrong_dir;
    return r;
}

}  // namespace snoe
