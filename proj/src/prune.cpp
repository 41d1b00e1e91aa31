#include "snoe/prune.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "snoe/spline.hpp"

namespace snoe {

namespace {

double abs_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd x = a.array() - a.mean();
    Eigen::VectorXd y = b.array() - b.mean();
    double den = std::sqrt(x.squaredNorm() * y.squaredNorm());
    return den > 0.0 ? std::abs(x.dot(y) / den) : 0.0;
}

}  // namespace

std::pair<MixedGraph, PruneReport> prune_edges(const DataMatrix& data, const MixedGraph& g,
                                               double alpha_prune) {
    const int p = g.num_nodes();
    const int n = static_cast<int>(data.values.rows());
    if (p != static_cast<int>(data.labels.size()))
        throw std::invalid_argument("prune_edges: graph and data disagree on variable count");

    PruneReport report;
    report.alpha_prune = alpha_prune;
    const int cap = std::max(1, n / 10);

    // p-value of predictor k's term in node i's model; untested terms absent
    std::map<std::pair<int, int>, double> term_p;  // key (i, k)

    for (int i = 0; i < p; ++i) {
        std::vector<int> pool = g.parents(i);
        for (int nb : g.neighbors(i)) pool.push_back(nb);
        std::sort(pool.begin(), pool.end());
        if (pool.empty()) continue;

        Eigen::VectorXd y = data.values.col(i);
        if (static_cast<int>(pool.size()) > cap) {
            std::vector<std::pair<double, int>> strength;
            for (int k : pool) strength.emplace_back(abs_corr(y, data.values.col(k)), k);
            std::sort(strength.begin(), strength.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            std::vector<int> kept_pool;
            for (int t = 0; t < cap; ++t) kept_pool.push_back(strength[t].second);
            std::sort(kept_pool.begin(), kept_pool.end());
            pool = std::move(kept_pool);
            report.screened_nodes.push_back(i);
        }

        Eigen::MatrixXd X(n, static_cast<Eigen::Index>(pool.size()));
        std::vector<std::string> names;
        for (std::size_t c = 0; c < pool.size(); ++c) {
            X.col(static_cast<Eigen::Index>(c)) = data.values.col(pool[c]);
            names.push_back(data.labels[pool[c]]);
        }
        try {
            AdditiveModel m = fit_additive(y, X, names);
            for (std::size_t c = 0; c < pool.size(); ++c)
                term_p[{i, pool[c]}] = term_significance(m, y, X, static_cast<int>(c));
        } catch (const std::exception& e) {
            report.warnings.push_back("node " + data.labels[i] + " fit failed, edges kept: " + e.what());
        }
    }

    // apply edits after every fit so the outcome is independent of node order
    MixedGraph out = g;
    for (auto [from, to] : g.directed_edges()) {
        auto it = term_p.find({to, from});
        if (it == term_p.end()) {
            report.kept.push_back({from, to, false, -1.0});
            continue;
        }
        if (it->second > alpha_prune) {
            out.remove_edge(from, to);
            report.removed.push_back({from, to, false, it->second});
        } else {
            report.kept.push_back({from, to, false, it->second});
        }
    }
    for (auto [a, b] : g.undirected_edges()) {
        auto pa = term_p.find({a, b});  // term for b in a's model
        auto pb = term_p.find({b, a});  // term for a in b's model
        if (pa == term_p.end() || pb == term_p.end()) {
            report.kept.push_back({a, b, true, -1.0});
            continue;
        }
        bool sig_in_a = pa->second <= alpha_prune;
        bool sig_in_b = pb->second <= alpha_prune;
        double pmin = std::min(pa->second, pb->second);
        if (!sig_in_a && !sig_in_b) {
            out.remove_edge(a, b);
            report.removed.push_back({a, b, true, pmin});
        } else if (sig_in_a != sig_in_b) {
            int from = sig_in_a ? b : a;  // significant in the child's model
            int to = sig_in_a ? a : b;
            if (out.orient(from, to)) {
                report.oriented.emplace_back(from, to);
            } else {
                report.warnings.push_back("orienting " + data.labels[from] + " -> " + data.labels[to] +
                                          " would close a cycle; kept undirected");
            }
            report.kept.push_back({a, b, true, pmin});
        } else {
            report.kept.push_back({a, b, true, pmin});
        }
    }
    return {std::move(out), std::move(report)};
}

MixedGraph refine_to_dag(const DataMatrix& data, const MixedGraph& g, const OrientOptions& opt,
                         const SplitIdx& split, OrientTrace* trace) {
    MixedGraph cur = orient_edges(data, g, opt, split, trace);
    while (true) {
        auto undirected = cur.undirected_edges();
        if (undirected.empty()) break;
        auto [a, b] = undirected.front();
        LrtOutcome outc = likelihood_test(data, split, cur, a, b, opt.alpha, opt.variant, opt.delta);
        int from = outc.lr_stat >= 0.0 ? a : b;
        int to = outc.lr_stat >= 0.0 ? b : a;
        if (!cur.orient(from, to) && !cur.orient(to, from)) break;  // both close cycles: bail to extension
        cur = meek_closure(std::move(cur));
    }
    if (cur.undirected_edge_count() > 0) {
        if (auto ext = extend_to_dag(cur)) return *ext;
    }
    return cur;
}

}  // namespace snoe
