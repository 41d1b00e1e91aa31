#include "snoe/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "snoe/spline.hpp"
#include "snoe/stats.hpp"

namespace snoe {

namespace {

Eigen::MatrixXd gather(const DataMatrix& data, const std::vector<int>& rows, const std::vector<int>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data.values(rows[r], cols[c]);
    return out;
}

Eigen::VectorXd gather_col(const DataMatrix& data, const std::vector<int>& rows, int col) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Eigen::Index>(r)) = data.values(rows[r], col);
    return out;
}

std::vector<std::string> names_for(const DataMatrix& data, const std::vector<int>& cols) {
    std::vector<std::string> out;
    for (int c : cols) out.push_back(data.labels[c]);
    return out;
}

double sample_variance(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    if (n < 2) return 0.0;
    double m = v.mean();
    return (v.array() - m).square().sum() / (n - 1);
}

// One direction's conditional factorization i -> j: p(x_j | pa(j), x_i) * p(x_i | pa(i)).
struct DirectionModels {
    AdditiveModel child;   // x_j on pa(j) u {i}
    AdditiveModel source;  // x_i on pa(i)
    std::vector<int> child_cols, source_cols;
};

DirectionModels fit_direction(const DataMatrix& data, const std::vector<int>& train,
                              const MixedGraph& g, int i, int j) {
    DirectionModels m;
    m.source_cols = g.parents(i);
    m.child_cols = g.parents(j);
    m.child_cols.push_back(i);
    std::sort(m.child_cols.begin(), m.child_cols.end());
    m.source = fit_additive(gather_col(data, train, i), gather(data, train, m.source_cols), names_for(data, m.source_cols));
    m.child = fit_additive(gather_col(data, train, j), gather(data, train, m.child_cols), names_for(data, m.child_cols));
    return m;
}

Eigen::VectorXd direction_loglik(const DirectionModels& m, const DataMatrix& data,
                                 const std::vector<int>& rows, int i, int j) {
    Eigen::VectorXd ll = gaussian_loglik(m.source, gather_col(data, rows, i), gather(data, rows, m.source_cols));
    ll += gaussian_loglik(m.child, gather_col(data, rows, j), gather(data, rows, m.child_cols));
    return ll;
}

struct FoldResult {
    double stat = 0.0;
    double p = 1.0;
    double ratio = 0.0;
};

FoldResult run_fold(const DataMatrix& data, const std::vector<int>& train, const std::vector<int>& test,
                    const MixedGraph& g, int i, int j) {
    for (int col : {i, j}) {
        // a constant target makes the Gaussian factor degenerate
        Eigen::VectorXd v = gather_col(data, train, col);
        double mean = v.mean();
        double sd = std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
        if (sd <= 1e-12 * (1.0 + std::abs(mean)))
            throw DegenerateColumnError("likelihood_test: constant column " + data.labels[col]);
    }
    DirectionModels fwd = fit_direction(data, train, g, i, j);  // F: i -> j
    DirectionModels bwd = fit_direction(data, train, g, j, i);  // G: j -> i
    Eigen::VectorXd llF = direction_loglik(fwd, data, test, i, j);
    Eigen::VectorXd llG = direction_loglik(bwd, data, test, j, i);
    Eigen::VectorXd R = llF - llG;
    const int nt = static_cast<int>(test.size());
    double omega2 = sample_variance(R);
    double v2 = std::min(sample_variance(llF), sample_variance(llG));
    FoldResult r;
    r.ratio = v2 > 1e-300 ? omega2 / v2 : 0.0;
    if (omega2 > 0.0) {
        r.stat = R.sum() / (std::sqrt(static_cast<double>(nt)) * std::sqrt(omega2));
        r.p = 2.0 * normal_cdf(-std::abs(r.stat));
    }
    return r;
}

}  // namespace

double directional_dependence(const DataMatrix& data, const SplitIdx& split, const MixedGraph& g,
                              int i, int j) {
    DirectionModels m = fit_direction(data, split.train, g, i, j);
    double best = 0.0;
    auto scan = [&](const AdditiveModel& model, int target, const std::vector<int>& cols) {
        if (cols.empty()) return;
        Eigen::VectorXd resid = residuals(model, gather_col(data, split.test, target), gather(data, split.test, cols));
        for (int c : cols) {
            try {
                best = std::max(best, normalized_mi(resid, gather_col(data, split.test, c)));
            } catch (const DegenerateColumnError&) {
                // a constant residual or covariate carries no dependence signal
            }
        }
    };
    scan(m.source, i, m.source_cols);
    scan(m.child, j, m.child_cols);
    return best;
}

std::vector<EdgeScore> rank_edges(const DataMatrix& data, const SplitIdx& split, const MixedGraph& g,
                                  const std::vector<std::pair<int, int>>& edges, RankingMode mode) {
    std::vector<EdgeScore> out;
    out.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a > b) std::swap(a, b);
        if (!g.has_undirected(a, b)) throw std::invalid_argument("rank_edges: edge is not undirected in the graph");
        EdgeScore s;
        s.i = a;
        s.j = b;
        auto na = g.neighbors(a);
        auto nb = g.neighbors(b);
        std::vector<int> common;
        std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
        s.shared_neighbors = static_cast<int>(common.size());
        s.i_fwd = directional_dependence(data, split, g, a, b);
        s.i_bwd = directional_dependence(data, split, g, b, a);
        s.score = std::min(s.i_fwd, s.i_bwd);
        out.push_back(s);
    }
    auto key_lt = [mode](const EdgeScore& x, const EdgeScore& y) {
        if (mode == RankingMode::Partitioned && x.shared_neighbors != y.shared_neighbors)
            return x.shared_neighbors < y.shared_neighbors;
        if (x.score != y.score) return x.score < y.score;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    };
    std::sort(out.begin(), out.end(), key_lt);
    return out;
}

LrtOutcome likelihood_test(const DataMatrix& data, const SplitIdx& split, const MixedGraph& g,
                           int i, int j, double alpha, LrtVariant variant, double delta) {
    if (!g.has_undirected(i, j)) throw std::invalid_argument("likelihood_test: edge is not undirected");
    LrtOutcome out;
    try {
        FoldResult f1 = run_fold(data, split.train, split.test, g, i, j);
        if (variant == LrtVariant::SS) {
            out.lr_stat = f1.stat;
            out.p_value = f1.p;
            out.variance_ratio = f1.ratio;
            if (f1.ratio <= delta) {
                out.decision = LrtDecision::Indistinguishable;
            } else if (f1.p < alpha) {
                out.decision = f1.stat > 0.0 ? LrtDecision::Forward : LrtDecision::Backward;
            }
            return out;
        }
        FoldResult f2 = run_fold(data, split.test, split.train, g, i, j);
        out.per_fold = std::make_pair(FoldStat{f1.stat, f1.p}, FoldStat{f2.stat, f2.p});
        out.lr_stat = 0.5 * (f1.stat + f2.stat);
        out.p_value = std::max(f1.p, f2.p);
        out.variance_ratio = std::min(f1.ratio, f2.ratio);
        if (out.variance_ratio <= delta) {
            out.decision = LrtDecision::Indistinguishable;
        } else if (out.p_value < alpha && f1.stat > 0.0 && f2.stat > 0.0) {
            out.decision = LrtDecision::Forward;
        } else if (out.p_value < alpha && f1.stat < 0.0 && f2.stat < 0.0) {
            out.decision = LrtDecision::Backward;
        }
        return out;
    } catch (const std::exception& e) {
        out.decision = LrtDecision::Undirected;
        out.note = e.what();
        return out;
    }
}

namespace {

int shared_neighbor_count(const MixedGraph& g, int a, int b) {
    auto na = g.neighbors(a);
    auto nb = g.neighbors(b);
    std::vector<int> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    return static_cast<int>(common.size());
}

std::vector<std::vector<int>> all_parent_sets(const MixedGraph& g) {
    std::vector<std::vector<int>> out(g.num_nodes());
    for (int v = 0; v < g.num_nodes(); ++v) out[v] = g.parents(v);
    return out;
}

}  // namespace

MixedGraph orient_edges(const DataMatrix& data, const MixedGraph& g, const OrientOptions& opt,
                        const SplitIdx& split, OrientTrace* trace) {
    MixedGraph cur = g;
    OrientTrace local;
    OrientTrace& tr = trace ? *trace : local;
    const std::array<bool, 4> in_loop_rules = opt.meek_all_in_loop
                                                  ? std::array<bool, 4>{true, true, true, true}
                                                  : std::array<bool, 4>{true, false, false, false};

    bool changed = true;
    while (changed) {
        changed = false;
        // stratum membership fixed per outer pass
        std::map<std::pair<int, int>, int> stratum_of;
        int max_stratum = 0;
        for (auto [a, b] : cur.undirected_edges()) {
            int s = shared_neighbor_count(cur, a, b);
            stratum_of[{a, b}] = s;
            max_stratum = std::max(max_stratum, s);
        }
        if (stratum_of.empty()) break;

        for (int s = 0; s <= max_stratum; ++s) {
            std::vector<std::pair<int, int>> members;
            for (const auto& [e, cnt] : stratum_of)
                if ((opt.ranking == RankingMode::Global || cnt == s) && cur.has_undirected(e.first, e.second))
                    members.push_back(e);
            if (opt.ranking == RankingMode::Global && s > 0) break;
            if (members.empty()) continue;

            std::map<std::pair<int, int>, double> score;
            for (auto [a, b] : members) {
                double fwd = directional_dependence(data, split, cur, a, b);
                double bwd = directional_dependence(data, split, cur, b, a);
                score[{a, b}] = std::min(fwd, bwd);
            }
            auto next_edge = [&]() {
                std::pair<int, int> best{-1, -1};
                double best_score = 0.0;
                for (auto [a, b] : members) {
                    if (!cur.has_undirected(a, b) || !score.count({a, b})) continue;
                    if (best.first < 0 || score[{a, b}] < best_score) {
                        best = {a, b};
                        best_score = score[{a, b}];
                    }
                }
                return best;
            };

            std::pair<int, int> e;
            while ((e = next_edge()).first >= 0) {
                auto [a, b] = e;
                score.erase(e);  // each edge is tested at most once per stratum pass
                tr.tests_run++;
                LrtOutcome outc = likelihood_test(data, split, cur, a, b, opt.alpha, opt.variant, opt.delta);
                if (outc.decision == LrtDecision::Indistinguishable) tr.indistinguishable++;
                if (outc.decision != LrtDecision::Forward && outc.decision != LrtDecision::Backward) continue;

                int from = outc.decision == LrtDecision::Forward ? a : b;
                int to = outc.decision == LrtDecision::Forward ? b : a;
                auto parents_before = all_parent_sets(cur);
                int dir_before = static_cast<int>(cur.directed_edges().size());
                if (!cur.orient(from, to)) {
                    tr.conflicts++;
                    continue;
                }
                tr.oriented_by_test++;
                changed = true;
                orient_common_nc(cur, from, to, &tr.conflicts);
                cur = meek_closure(std::move(cur), in_loop_rules);
                tr.oriented_by_propagation += static_cast<int>(cur.directed_edges().size()) - dir_before - 1;

                // refresh scores only where a parent set moved
                auto parents_after = all_parent_sets(cur);
                for (auto& [edge2, sc] : score) {
                    auto [x, y2] = edge2;
                    if (!cur.has_undirected(x, y2)) continue;
                    if (parents_before[x] != parents_after[x] || parents_before[y2] != parents_after[y2]) {
                        double fwd = directional_dependence(data, split, cur, x, y2);
                        double bwd = directional_dependence(data, split, cur, y2, x);
                        sc = std::min(fwd, bwd);
                    }
                }
            }
        }
    }
    return meek_closure(std::move(cur));
}

MixedGraph sequential_orientation_oracle(const MixedGraph& cpdag,
                                         const std::function<bool(const MixedGraph&, int, int)>& panm,
                                         const std::function<bool(int, int)>& direction) {
    MixedGraph g = cpdag;
    while (g.undirected_edge_count() > 0) {
        std::pair<int, int> found{-1, -1};
        for (auto [a, b] : g.undirected_edges()) {
            if (panm(g, a, b)) { found = {a, b}; break; }
        }
        if (found.first < 0)
            throw std::logic_error("sequential_orientation_oracle: undirected edges remain but none satisfies the pairwise-ANM condition");
        auto [a, b] = found;
        int from = direction(a, b) ? a : b;
        int to = direction(a, b) ? b : a;
        if (!g.orient(from, to))
            throw std::logic_error("sequential_orientation_oracle: oracle direction closes a cycle");
        orient_common_nc(g, from, to);
        g = meek_closure(std::move(g), {true, false, false, false});
    }
    g = meek_closure(std::move(g));
    if (!g.is_dag()) throw std::logic_error("sequential_orientation_oracle: output is not a DAG");
    return g;
}

}  // namespace snoe
