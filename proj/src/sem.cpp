#include "snoe/sem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "snoe/rng.hpp"

namespace snoe {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

Mechanism invertible_pick(int k) {
    switch (k) {
        case 0: return Mechanism::Cubic;
        case 1: return Mechanism::InverseSine;
        case 2: return Mechanism::Piecewise;
        default: return Mechanism::Exponential;
    }
}

double apply_shape(Mechanism m, double x) {
    switch (m) {
        case Mechanism::Cubic: return x * x * x;
        case Mechanism::InverseSine: return std::asin(x / (1.0 + std::abs(x)));
        case Mechanism::Piecewise: return x < 0.0 ? 0.5 * x : 2.0 * x;
        case Mechanism::Exponential: return std::exp(0.5 * x);
        case Mechanism::Quadratic: return x * x;
        // saturating sigmoid: the knee sits well inside one input sd so the
        // mechanism is strongly nonlinear on standardized inputs
        case Mechanism::Sigmoid: return 5.0 * std::tanh(5.0 * x);
        default: throw std::logic_error("apply_shape: not a pointwise mechanism");
    }
}

void standardize(Eigen::VectorXd& v) {
    v.array() -= v.mean();
    double sd = std::sqrt(v.squaredNorm() / std::max<Eigen::Index>(v.size() - 1, 1));
    if (sd > 1e-12) v /= sd;
    // clamp far tails so moment-amplifying shapes (x^3, e^{x/2}) cannot
    // compound single-point leverage along deep chains
    v = v.cwiseMax(-8.0).cwiseMin(8.0);
}

Eigen::VectorXd noise_column(NoiseKind kind, int n, double sigma, std::mt19937_64& rng) {
    Eigen::VectorXd out(n);
    switch (kind) {
        case NoiseKind::Gaussian: {
            std::normal_distribution<double> d(0.0, sigma);
            for (int i = 0; i < n; ++i) out(i) = d(rng);
            break;
        }
        case NoiseKind::StudentT: {
            std::student_t_distribution<double> d(5.0);
            double scale = sigma / std::sqrt(5.0 / 3.0);
            for (int i = 0; i < n; ++i) out(i) = scale * d(rng);
            break;
        }
        case NoiseKind::Laplace: {
            std::uniform_real_distribution<double> d(-0.5, 0.5);
            double b = sigma / std::sqrt(2.0);
            for (int i = 0; i < n; ++i) {
                double u = d(rng);
                out(i) = -b * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
            }
            break;
        }
        case NoiseKind::Gumbel: {
            std::extreme_value_distribution<double> d(0.0, 1.0);
            double scale = sigma * std::sqrt(6.0) / std::numbers::pi;
            for (int i = 0; i < n; ++i) out(i) = scale * (d(rng) - kEulerGamma);
            break;
        }
    }
    return out;
}

Eigen::VectorXd gp_draw(const Eigen::VectorXd& x, double bandwidth, std::mt19937_64& rng) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double d = x(i) - x(j);
            K(i, j) = K(j, i) = std::exp(-bandwidth * d * d);
        }
    K.diagonal().array() += 1e-8;
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("gp_draw: kernel matrix Cholesky failed");
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = d(rng);
    return llt.matrixL() * z;
}

}  // namespace

Mechanism mechanism_from_string(const std::string& s) {
    if (s == "linear") return Mechanism::Linear;
    if (s == "cubic") return Mechanism::Cubic;
    if (s == "inverse_sine") return Mechanism::InverseSine;
    if (s == "piecewise") return Mechanism::Piecewise;
    if (s == "exponential") return Mechanism::Exponential;
    if (s == "quadratic") return Mechanism::Quadratic;
    if (s == "sigmoid") return Mechanism::Sigmoid;
    if (s == "invertible") return Mechanism::InvertibleMix;
    if (s == "gp") return Mechanism::Gp;
    if (s == "mlp") return Mechanism::Mlp;
    throw std::invalid_argument("unknown mechanism: " + s);
}

NoiseKind noise_from_string(const std::string& s) {
    if (s == "gaussian") return NoiseKind::Gaussian;
    if (s == "student_t") return NoiseKind::StudentT;
    if (s == "laplace") return NoiseKind::Laplace;
    if (s == "gumbel") return NoiseKind::Gumbel;
    throw std::invalid_argument("unknown noise kind: " + s);
}

const char* to_string(Mechanism m) {
    switch (m) {
        case Mechanism::Linear: return "linear";
        case Mechanism::Cubic: return "cubic";
        case Mechanism::InverseSine: return "inverse_sine";
        case Mechanism::Piecewise: return "piecewise";
        case Mechanism::Exponential: return "exponential";
        case Mechanism::Quadratic: return "quadratic";
        case Mechanism::Sigmoid: return "sigmoid";
        case Mechanism::InvertibleMix: return "invertible";
        case Mechanism::Gp: return "gp";
        case Mechanism::Mlp: return "mlp";
    }
    return "?";
}

const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::Gaussian: return "gaussian";
        case NoiseKind::StudentT: return "student_t";
        case NoiseKind::Laplace: return "laplace";
        case NoiseKind::Gumbel: return "gumbel";
    }
    return "?";
}

DataMatrix sample_data(const SemSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("sample_data: n must be positive");
    if (!spec.dag.is_dag()) throw std::invalid_argument("sample_data: structure must be a DAG");
    const int p = spec.dag.num_nodes();
    auto order = spec.dag.topo_order();

    auto rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> sigma_d(spec.sigma_range.first, spec.sigma_range.second);
    std::uniform_real_distribution<double> slope_d(0.5, 2.0);
    std::uniform_real_distribution<double> band_d(spec.gp_bandwidth_range.first, spec.gp_bandwidth_range.second);
    std::uniform_int_distribution<int> pick4(0, 3);
    std::uniform_int_distribution<int> sign_d(0, 1);
    std::uniform_real_distribution<double> weight_d(-1.0, 1.0);

    // structural draws first, keyed by node index, so the draw sequence does
    // not depend on the sampling order
    std::vector<double> sigma(p);
    for (int v = 0; v < p; ++v) sigma[v] = sigma_d(rng);

    // Every mechanism consumes the parent column standardized to zero mean and
    // unit variance; the mechanism output is added as-is. Unit-scale inputs keep
    // composed unbounded shapes (cubic, exp) finite at any graph depth and make
    // the kernel bandwidth and noise scale comparable across nodes.
    Eigen::MatrixXd X(n, p);
    for (int v : *order) {
        Eigen::VectorXd col = noise_column(spec.noise, n, sigma[v], rng);
        auto pa = spec.dag.parents(v);
        if (!pa.empty() && spec.mechanism == Mechanism::Mlp) {
            const int h = 200;
            const int k = static_cast<int>(pa.size());
            Eigen::MatrixXd W1(h, k);
            Eigen::VectorXd w2(h);
            for (int r = 0; r < h; ++r)
                for (int c = 0; c < k; ++c) W1(r, c) = weight_d(rng);
            for (int r = 0; r < h; ++r) w2(r) = weight_d(rng);
            Eigen::MatrixXd P(n, k);
            for (int c = 0; c < k; ++c) {
                Eigen::VectorXd in = X.col(pa[c]);
                standardize(in);
                P.col(c) = in;
            }
            Eigen::MatrixXd hidden = (P * W1.transpose()).unaryExpr([](double t) { return 1.0 / (1.0 + std::exp(-t)); });
            col += hidden * w2;
        } else {
            for (int u : pa) {
                Eigen::VectorXd in = X.col(u);
                standardize(in);
                if (spec.mechanism == Mechanism::Linear) {
                    double slope = slope_d(rng) * (sign_d(rng) ? 1.0 : -1.0);
                    col += slope * in;
                } else if (spec.mechanism == Mechanism::Gp) {
                    col += gp_draw(in, band_d(rng), rng);
                } else {
                    Mechanism m = spec.mechanism == Mechanism::InvertibleMix ? invertible_pick(pick4(rng)) : spec.mechanism;
                    col += in.unaryExpr([m](double t) { return apply_shape(m, t); });
                }
            }
        }
        X.col(v) = col;
    }

    DataMatrix out;
    out.labels = spec.dag.labels();
    out.values = std::move(X);
    return out;
}

MixedGraph random_dag(int p, double expected_degree, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("random_dag: p must be positive");
    if (expected_degree < 0) throw std::invalid_argument("random_dag: degree must be nonnegative");
    MixedGraph g(p);
    if (p == 1) return g;
    auto rng = make_rng(seed);
    std::vector<int> perm(p);
    for (int i = 0; i < p; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    double prob = std::min(1.0, expected_degree / (p - 1));
    std::bernoulli_distribution coin(prob);
    for (int u = 0; u < p; ++u)
        for (int v = u + 1; v < p; ++v)
            if (coin(rng) && !g.orient(perm[u], perm[v]))
                throw std::logic_error("random_dag: orientation rejected on acyclic order");
    return g;
}

}  // namespace snoe
