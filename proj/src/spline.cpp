#include "snoe/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>

namespace snoe {

namespace {

constexpr int kOrder = 4;  // cubic
constexpr double kRidgeJitter = 1e-10;
constexpr int kLambdaGridSize = 17;

std::vector<double> lambda_grid() {
    std::vector<double> g(kLambdaGridSize);
    // 17 log-spaced points covering 1e-4 .. 1e4
    for (int i = 0; i < kLambdaGridSize; ++i) g[i] = std::pow(10.0, -4.0 + 8.0 * i / (kLambdaGridSize - 1));
    return g;
}

// Values (and optionally first derivatives) of all cubic B-spline basis
// functions at x, which must lie in [t.front(), t.back()]. Cox-de Boor
// bottom-up over the full knot vector; nb = t.size() - kOrder.
void bspline_row(const std::vector<double>& t, double x, double* val, double* der) {
    const int nspans = static_cast<int>(t.size()) - 1;
    const int nb = static_cast<int>(t.size()) - kOrder;
    std::vector<double> N(nspans, 0.0);
    bool placed = false;
    for (int j = 0; j < nspans; ++j) {
        if (t[j] <= x && x < t[j + 1]) { N[j] = 1.0; placed = true; break; }
    }
    if (!placed) {  // x == t.back(): use the last non-empty span
        for (int j = nspans - 1; j >= 0; --j)
            if (t[j] < t[j + 1]) { N[j] = 1.0; break; }
    }
    std::vector<double> N3;  // order-3 values, kept for the derivative
    for (int m = 2; m <= kOrder; ++m) {
        if (m == kOrder && der) N3.assign(N.begin(), N.end());
        for (int j = 0; j + m - 1 < nspans; ++j) {
            double a = 0.0, b = 0.0;
            if (t[j + m - 1] > t[j]) a = (x - t[j]) / (t[j + m - 1] - t[j]) * N[j];
            if (t[j + m] > t[j + 1]) b = (t[j + m] - x) / (t[j + m] - t[j + 1]) * N[j + 1];
            N[j] = a + b;
        }
    }
    for (int j = 0; j < nb; ++j) val[j] = N[j];
    if (der) {
        for (int j = 0; j < nb; ++j) {
            double d = 0.0;
            if (t[j + 3] > t[j]) d += N3[j] / (t[j + 3] - t[j]);
            if (t[j + 4] > t[j + 1]) d -= N3[j + 1] / (t[j + 4] - t[j + 1]);
            der[j] = 3.0 * d;
        }
    }
}

// Basis row with linear continuation beyond the boundary knots.
void basis_row_extrapolating(const SmoothTerm& term, double x, Eigen::VectorXd& row) {
    const int nb = static_cast<int>(term.beta.size());
    row.resize(nb);
    if (x >= term.xmin && x <= term.xmax) {
        bspline_row(term.knots, x, row.data(), nullptr);
        return;
    }
    double xb = x < term.xmin ? term.xmin : term.xmax;
    Eigen::VectorXd d(nb);
    bspline_row(term.knots, xb, row.data(), d.data());
    row += (x - xb) * d;
}

struct TermWorkspace {
    Eigen::MatrixXd B;    // n x nb basis over training x
    Eigen::MatrixXd BtB;
    Eigen::MatrixXd P;    // penalty: D'D over Greville second divided differences
};

std::vector<double> make_knots(const std::vector<double>& sorted_x, int n) {
    const double lo = sorted_x.front(), hi = sorted_x.back();
    int distinct = 1;
    for (std::size_t i = 1; i < sorted_x.size(); ++i) distinct += (sorted_x[i] != sorted_x[i - 1]);
    int m = std::min({10, n / 20, distinct - 2});
    m = std::max(m, 0);
    std::vector<double> interior;
    for (int i = 1; i <= m; ++i) {
        long long idx = (static_cast<long long>(n) * i + m) / (m + 1) - 1;
        double q = sorted_x[static_cast<std::size_t>(std::clamp<long long>(idx, 0, n - 1))];
        if (q <= lo || q >= hi) continue;
        if (interior.empty() || q > interior.back()) interior.push_back(q);
    }
    std::vector<double> t;
    t.insert(t.end(), kOrder, lo);
    t.insert(t.end(), interior.begin(), interior.end());
    t.insert(t.end(), kOrder, hi);
    return t;
}

Eigen::MatrixXd greville_penalty(const std::vector<double>& t) {
    const int nb = static_cast<int>(t.size()) - kOrder;
    std::vector<double> xi(nb);
    for (int j = 0; j < nb; ++j) xi[j] = (t[j + 1] + t[j + 2] + t[j + 3]) / 3.0;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(std::max(nb - 2, 0), nb);
    for (int j = 0; j + 2 < nb; ++j) {
        double h1 = std::max(xi[j + 1] - xi[j], 1e-12);
        double h2 = std::max(xi[j + 2] - xi[j + 1], 1e-12);
        D(j, j) = 1.0 / h1;
        D(j, j + 1) = -1.0 / h1 - 1.0 / h2;
        D(j, j + 2) = 1.0 / h2;
    }
    return D.transpose() * D;
}

struct PenalizedFit {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    double edf_raw = 0.0;  // tr(A^-1 B'B), includes the constant direction
};

// Minimize ||r - B beta||^2 + lambda beta'P beta over the lambda grid by GCV.
PenalizedFit fit_term_gcv(const TermWorkspace& w, const Eigen::VectorXd& r, const std::string& name) {
    const double n = static_cast<double>(w.B.rows());
    Eigen::VectorXd Btr = w.B.transpose() * r;
    const double rtr = r.squaredNorm();
    PenalizedFit best;
    double best_gcv = std::numeric_limits<double>::infinity();
    for (double lam : lambda_grid()) {
        Eigen::MatrixXd A = w.BtB + lam * w.P;
        A.diagonal().array() += kRidgeJitter;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("fit_additive: ill-conditioned design for predictor '" + name + "'");
        Eigen::VectorXd beta = ldlt.solve(Btr);
        double edf = ldlt.solve(w.BtB).trace();
        double rss = rtr - 2.0 * beta.dot(Btr) + beta.dot(w.BtB * beta);
        rss = std::max(rss, 0.0);
        double denom = n - edf;
        if (denom < 1.0) denom = 1.0;
        double gcv = n * rss / (denom * denom);
        if (gcv < best_gcv) {
            best_gcv = gcv;
            best.beta = std::move(beta);
            best.lambda = lam;
            best.edf_raw = edf;
        }
    }
    return best;
}

}  // namespace

double SmoothTerm::eval(double x) const {
    if (dropped) return 0.0;
    Eigen::VectorXd row;
    basis_row_extrapolating(*this, x, row);
    return row.dot(beta) - center;
}

AdditiveModel fit_additive(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           const std::vector<std::string>& names) {
    const int n = static_cast<int>(y.size());
    const int q = static_cast<int>(X.cols());
    if (n == 0) throw std::invalid_argument("fit_additive: empty response");
    if (q > 0 && X.rows() != n) throw std::invalid_argument("fit_additive: X/y row mismatch");
    if (!y.allFinite() || (q > 0 && !X.allFinite()))
        throw std::invalid_argument("fit_additive: non-finite value in the training data");

    AdditiveModel m;
    m.n_train = n;
    m.n_cols = q;
    m.intercept = y.mean();
    Eigen::VectorXd yc = y.array() - m.intercept;
    const double var_y = n > 1 ? yc.squaredNorm() / (n - 1) : 0.0;

    std::vector<TermWorkspace> work(q);
    std::vector<Eigen::VectorXd> fitted(q, Eigen::VectorXd::Zero(n));
    for (int j = 0; j < q; ++j) {
        SmoothTerm t;
        t.col = j;
        t.name = j < static_cast<int>(names.size()) ? names[j] : "x" + std::to_string(j);
        std::vector<double> sorted_x(X.col(j).data(), X.col(j).data() + n);
        std::sort(sorted_x.begin(), sorted_x.end());
        t.xmin = sorted_x.front();
        t.xmax = sorted_x.back();
        if (t.xmin == t.xmax) {
            t.dropped = true;
            t.edf = 0.0;
            m.terms.push_back(std::move(t));
            continue;
        }
        t.knots = make_knots(sorted_x, n);
        const int nb = static_cast<int>(t.knots.size()) - kOrder;
        t.beta = Eigen::VectorXd::Zero(nb);
        m.terms.push_back(std::move(t));

        TermWorkspace& w = work[j];
        w.B.resize(n, nb);
        Eigen::VectorXd row(nb);
        for (int i = 0; i < n; ++i) {
            bspline_row(m.terms[j].knots, X(i, j), row.data(), nullptr);
            w.B.row(i) = row;
        }
        w.BtB = w.B.transpose() * w.B;
        w.P = greville_penalty(m.terms[j].knots);
    }

    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int j = 0; j < q; ++j) {
            SmoothTerm& t = m.terms[j];
            if (t.dropped) continue;
            Eigen::VectorXd r = yc;
            for (int k = 0; k < q; ++k)
                if (k != j) r -= fitted[k];
            PenalizedFit fit = fit_term_gcv(work[j], r, t.name);
            t.beta = fit.beta;
            t.lambda = fit.lambda;
            t.edf = std::max(fit.edf_raw - 1.0, 1.0);  // centering absorbs the constant direction
            Eigen::VectorXd f = work[j].B * t.beta;
            t.center = f.mean();
            fitted[j] = f.array() - t.center;
        }
    }

    Eigen::VectorXd resid = yc;
    for (int j = 0; j < q; ++j) resid -= fitted[j];
    m.rss = resid.squaredNorm();
    m.edf_total = 1.0;
    for (const auto& t : m.terms) m.edf_total += t.edf;
    double dof = static_cast<double>(n) - m.edf_total;
    double s2 = dof >= 1.0 ? m.rss / dof : 0.0;
    m.sigma2 = std::max({s2, 1e-8 * var_y, 1e-12});
    return m;
}

Eigen::VectorXd predict(const AdditiveModel& m, const Eigen::MatrixXd& X) {
    if (static_cast<int>(X.cols()) != m.n_cols)
        throw std::invalid_argument("predict: expected " + std::to_string(m.n_cols) + " predictor columns, got " + std::to_string(X.cols()));
    const int n = static_cast<int>(X.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, m.intercept);
    Eigen::VectorXd row;
    for (const auto& t : m.terms) {
        if (t.dropped) continue;
        for (int i = 0; i < n; ++i) {
            basis_row_extrapolating(t, X(i, t.col), row);
            out(i) += row.dot(t.beta) - t.center;
        }
    }
    return out;
}

Eigen::VectorXd residuals(const AdditiveModel& m, const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    return y - predict(m, X);
}

Eigen::VectorXd gaussian_loglik(const AdditiveModel& m, const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    Eigen::VectorXd r = residuals(m, y, X);
    const double c = -0.5 * std::log(2.0 * M_PI * m.sigma2);
    return (c - r.array().square() / (2.0 * m.sigma2)).matrix();
}

double term_significance(const AdditiveModel& m, const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int term_index) {
    if (term_index < 0 || term_index >= static_cast<int>(m.terms.size()))
        throw std::invalid_argument("term_significance: no such term");
    const SmoothTerm& t = m.terms[term_index];
    if (t.dropped) return 1.0;
    const int n = static_cast<int>(y.size());

    Eigen::MatrixXd Xred(n, m.n_cols - 1);
    std::vector<std::string> names;
    int c = 0;
    for (int j = 0; j < m.n_cols; ++j) {
        if (j == term_index) continue;
        Xred.col(c++) = X.col(j);
        names.push_back(m.terms[j].name);
    }
    AdditiveModel reduced = fit_additive(y, Xred, names);

    double df1 = t.edf;
    double df2 = static_cast<double>(n) - m.edf_total;
    if (df2 < 1.0) df2 = 1.0;
    double denom = std::max(m.rss / df2, 1e-300);
    double fstat = (reduced.rss - m.rss) / df1 / denom;
    if (!(fstat > 0.0)) return 1.0;
    boost::math::fisher_f_distribution<double> fdist(df1, df2);
    return boost::math::cdf(boost::math::complement(fdist, fstat));
}

}  // namespace snoe
