#include "snoe/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "snoe/rng.hpp"

namespace snoe {

namespace {

struct StageClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double lap() {
        auto t1 = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t1 - t0).count();
        t0 = t1;
        return s;
    }
};

template <typename F>
auto run_stage(const std::string& name, F&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        throw StageError(name, e.what());
    } catch (const std::runtime_error& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

void PipelineConfig::validate() const {
    auto in_unit = [](double a) { return a > 0.0 && a < 1.0; };
    if (!in_unit(alpha1) || !in_unit(alpha2) || !in_unit(alpha_orient) || !in_unit(alpha_prune))
        throw std::invalid_argument("pipeline config: significance levels must lie in (0, 1)");
    if (alpha2 <= alpha1)
        throw std::invalid_argument("pipeline config: alpha2 must exceed alpha1");
    if (delta < 0.0) throw std::invalid_argument("pipeline config: delta must be nonnegative");
    if (max_cond_size < 0) throw std::invalid_argument("pipeline config: max_cond_size must be nonnegative");
}

std::pair<MixedGraph, StageTrace> run_pipeline(const DataMatrix& data, const PipelineConfig& cfg) {
    cfg.validate();
    StageTrace trace;
    StageClock clock;
    SplitIdx split = split_half(data.n(), derive_seed(cfg.seed, 1));

    InitialGraphResult init = run_stage("initial", [&] {
        return initial_pdag(data, cfg.alpha1, cfg.alpha2, SkeletonOptions{cfg.max_cond_size});
    });
    trace.candidate_edges = static_cast<int>(init.candidate_edges.size());
    trace.vstructure_conflicts = init.vstructure_conflicts;
    trace.stages.push_back({"initial", init.pdag, clock.lap()});

    OrientOptions oopt;
    oopt.alpha = cfg.alpha_orient;
    oopt.variant = cfg.variant;
    oopt.delta = cfg.delta;
    oopt.ranking = cfg.ranking;

    MixedGraph oriented = run_stage("orient", [&] {
        return orient_edges(data, init.pdag, oopt, split, &trace.orient);
    });
    trace.stages.push_back({"orient", oriented, clock.lap()});

    auto [pruned, prune_report] = run_stage("prune", [&] {
        return prune_edges(data, oriented, cfg.alpha_prune);
    });
    trace.prune = std::move(prune_report);
    trace.stages.push_back({"prune", pruned, clock.lap()});

    MixedGraph out = pruned;
    if (cfg.output_kind == PipelineConfig::Output::Dag) {
        out = run_stage("refine", [&] { return refine_to_dag(data, pruned, oopt, split); });
        trace.stages.push_back({"refine", out, clock.lap()});
    }
    return {std::move(out), std::move(trace)};
}

PairVerdict orient_pair(const DataMatrix& data, const std::string& col_x, const std::string& col_y,
                        const PipelineConfig& cfg) {
    cfg.validate();
    int cx = data.col(col_x);
    int cy = data.col(col_y);
    if (cx == cy) throw std::invalid_argument("orient_pair: the two columns must differ");
    for (int c : {cx, cy}) {
        Eigen::VectorXd v = data.values.col(c);
        if ((v.array() - v(0)).abs().maxCoeff() < 1e-12)
            throw std::invalid_argument("orient_pair: column " + data.labels[c] + " is constant");
    }

    DataMatrix sub;
    sub.labels = {col_x, col_y};
    sub.values.resize(data.n(), 2);
    sub.values.col(0) = data.values.col(cx);
    sub.values.col(1) = data.values.col(cy);

    MixedGraph g(sub.labels);
    g.add_undirected(0, 1);
    SplitIdx split = split_half(sub.n(), derive_seed(cfg.seed, 1));

    PairVerdict v;
    v.outcome = likelihood_test(sub, split, g, 0, 1, cfg.alpha_orient, cfg.variant, cfg.delta);
    bool fwd = v.outcome.lr_stat >= 0.0;
    v.forced_from = fwd ? 0 : 1;
    v.forced_to = fwd ? 1 : 0;

    std::ostringstream os;
    os.precision(4);
    const std::string arrow_fwd = col_x + " -> " + col_y;
    const std::string arrow_bwd = col_y + " -> " + col_x;
    switch (v.outcome.decision) {
        case LrtDecision::Forward: os << arrow_fwd << " (significant"; break;
        case LrtDecision::Backward: os << arrow_bwd << " (significant"; break;
        case LrtDecision::Indistinguishable:
            os << "indistinguishable: directions fit equally well (variance ratio "
               << v.outcome.variance_ratio << " <= " << cfg.delta;
            break;
        case LrtDecision::Undirected:
            os << "undetermined at alpha = " << cfg.alpha_orient << " (higher-likelihood direction "
               << (fwd ? arrow_fwd : arrow_bwd);
            break;
    }
    os << ", stat = " << v.outcome.lr_stat << ", p = " << v.outcome.p_value << ")";
    v.text = os.str();
    return v;
}

}  // namespace snoe
