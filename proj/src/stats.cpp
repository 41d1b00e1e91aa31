#include "snoe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snoe {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

CiTestResult fisher_z_test(const DataMatrix& data, int i, int j, const std::vector<int>& S) {
    return fisher_z_test(data.values, i, j, S);
}

CiTestResult fisher_z_test(const Eigen::MatrixXd& values, int i, int j, const std::vector<int>& S) {
    const int n = static_cast<int>(values.rows());
    const int k = static_cast<int>(S.size());
    if (n <= k + 3) throw std::invalid_argument("fisher_z_test: need n > |S| + 3");
    for (int s : S)
        if (s == i || s == j) throw std::invalid_argument("fisher_z_test: conditioning set contains a tested column");

    std::vector<int> cols{i, j};
    cols.insert(cols.end(), S.begin(), S.end());
    const int m = static_cast<int>(cols.size());

    Eigen::MatrixXd sub(n, m);
    for (int c = 0; c < m; ++c) sub.col(c) = values.col(cols[c]);
    Eigen::RowVectorXd mean = sub.colwise().mean();
    sub.rowwise() -= mean;
    Eigen::RowVectorXd sd = (sub.colwise().squaredNorm() / n).cwiseSqrt();
    for (int c = 0; c < m; ++c) {
        // relative tolerance: centering a constant column leaves O(eps) residue
        if (sd(c) <= 1e-12 * (1.0 + std::abs(mean(c))))
            throw DegenerateColumnError("fisher_z_test: constant column " + std::to_string(cols[c]));
        sub.col(c) /= sd(c);
    }
    Eigen::MatrixXd corr = (sub.transpose() * sub) / n;

    double rho;
    if (k == 0) {
        rho = corr(0, 1);
    } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(corr);
        if (!lu.isInvertible())
            throw std::runtime_error("fisher_z_test: singular correlation submatrix for pair (" + std::to_string(i) + "," + std::to_string(j) + ") given |S|=" + std::to_string(k));
        Eigen::MatrixXd prec = lu.inverse();
        rho = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    }
    const double cap = 1.0 - 1e-12;
    rho = std::clamp(rho, -cap, cap);

    CiTestResult r;
    r.pcor = rho;
    r.cond_size = k;
    double z = 0.5 * std::log((1.0 + rho) / (1.0 - rho));
    r.statistic = std::sqrt(static_cast<double>(n - k - 3)) * z;
    r.p_value = 2.0 * normal_cdf(-std::abs(r.statistic));
    return r;
}

Discretized discretize(const Eigen::VectorXd& x, int bins) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("discretize: empty column");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(x(i))) throw std::runtime_error("discretize: non-finite value at row " + std::to_string(i));
    if (bins == 0) bins = std::clamp(static_cast<int>(std::floor(std::cbrt(static_cast<double>(n)) + 1e-9)), 4, 16);
    if (bins < 2) throw std::invalid_argument("discretize: need at least 2 bins");

    std::vector<double> sorted(x.data(), x.data() + n);
    std::sort(sorted.begin(), sorted.end());

    Discretized d;
    if (sorted.front() == sorted.back()) {
        d.labels.assign(n, 0);
        d.levels = 1;
        d.degenerate = true;
        return d;
    }
    // interior equal-frequency cut points (bin b holds sorted ranks up to
    // ceil(n*b/bins)); duplicates collapse
    for (int b = 1; b < bins; ++b) {
        long long idx = (static_cast<long long>(n) * b + bins - 1) / bins - 1;
        double q = sorted[static_cast<std::size_t>(std::clamp<long long>(idx, 0, n - 1))];
        if (d.edges.empty() || q > d.edges.back()) d.edges.push_back(q);
    }
    while (!d.edges.empty() && d.edges.back() >= sorted.back()) d.edges.pop_back();
    d.levels = static_cast<int>(d.edges.size()) + 1;
    d.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        // label = number of edges strictly below x(i) (bins are (e_{k-1}, e_k])
        int lab = static_cast<int>(std::lower_bound(d.edges.begin(), d.edges.end(), x(i)) - d.edges.begin());
        d.labels[i] = lab;
    }
    if (d.levels < 2) d.degenerate = true;
    return d;
}

DiscreteJoint joint_counts(const Discretized& x, const Discretized& y) {
    if (x.labels.size() != y.labels.size()) throw std::invalid_argument("joint_counts: length mismatch");
    DiscreteJoint j;
    j.counts.assign(x.levels, std::vector<long>(y.levels, 0));
    for (std::size_t i = 0; i < x.labels.size(); ++i) j.counts[x.labels[i]][y.labels[i]]++;
    j.n = static_cast<long>(x.labels.size());
    return j;
}

double mutual_information(const DiscreteJoint& j) {
    if (j.n <= 0) throw std::invalid_argument("mutual_information: empty table");
    const std::size_t A = j.counts.size();
    const std::size_t B = A ? j.counts[0].size() : 0;
    std::vector<double> pa(A, 0.0), pb(B, 0.0);
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = 0; b < B; ++b) {
            double pab = static_cast<double>(j.counts[a][b]) / j.n;
            pa[a] += pab;
            pb[b] += pab;
        }
    double mi = 0.0;
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = 0; b < B; ++b) {
            if (j.counts[a][b] == 0) continue;
            double pab = static_cast<double>(j.counts[a][b]) / j.n;
            mi += pab * std::log(pab / (pa[a] * pb[b]));
        }
    return mi;
}

double entropy(const std::vector<int>& labels, int levels) {
    if (labels.empty()) throw std::invalid_argument("entropy: empty column");
    std::vector<long> counts(levels, 0);
    for (int l : labels) counts.at(l)++;
    double h = 0.0;
    const double n = static_cast<double>(labels.size());
    for (long c : counts) {
        if (c == 0) continue;
        double p = c / n;
        h -= p * std::log(p);
    }
    return h;
}

double normalized_mi(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int bins) {
    Discretized dx = discretize(x, bins);
    Discretized dy = discretize(y, bins);
    if (dx.degenerate || dy.degenerate)
        throw DegenerateColumnError("normalized_mi: degenerate (constant) column");
    double hx = entropy(dx.labels, dx.levels);
    double hy = entropy(dy.labels, dy.levels);
    double denom = std::max(std::min(hx, hy), 1e-12);
    double v = mutual_information(joint_counts(dx, dy)) / denom;
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace snoe
