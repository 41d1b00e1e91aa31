#ifndef SNOE_SEM_HPP_
#define SNOE_SEM_HPP_

#include <cstdint>
#include <string>
#include <utility>

#include "snoe/dataset.hpp"
#include "snoe/graph.hpp"

namespace snoe {

// Edge mechanisms. InvertibleMix draws per edge from {Cubic, InverseSine,
// Piecewise, Exponential}. Gp realizes a squared-exponential Gaussian-process
// path on the parent's sampled values; Mlp is a per-node two-layer net with
// random uniform weights (width 200, logistic activation).
enum class Mechanism {
    Linear,
    Cubic,
    InverseSine,
    Piecewise,
    Exponential,
    Quadratic,
    Sigmoid,
    InvertibleMix,
    Gp,
    Mlp,
};

enum class NoiseKind { Gaussian, StudentT, Laplace, Gumbel };

struct SemSpec {
    MixedGraph dag;
    Mechanism mechanism = Mechanism::InvertibleMix;
    NoiseKind noise = NoiseKind::Gaussian;
    std::pair<double, double> sigma_range{0.5, 0.75};
    std::pair<double, double> gp_bandwidth_range{5.0, 5.25};
    std::uint64_t seed = 0;
};

Mechanism mechanism_from_string(const std::string& s);
NoiseKind noise_from_string(const std::string& s);
const char* to_string(Mechanism m);
const char* to_string(NoiseKind k);

// Ancestral sampling of the additive model X_v = sum_u f_{uv}(X_u) + eps_v.
// Noise sd per node ~ Unif(sigma_range); non-Gaussian noises are centered and
// rescaled to the drawn sd. Every nonlinear edge contribution is standardized
// over the dataset so deep chains stay on a common scale; Linear keeps its
// drawn slope (magnitude Unif(0.5, 2), random sign). Reproducible per
// (spec, n, seed).
DataMatrix sample_data(const SemSpec& spec, int n);

// Random DAG: lower triangle of a uniformly shuffled node order, each pair an
// edge independently with probability expected_degree / (p - 1).
MixedGraph random_dag(int p, double expected_degree, std::uint64_t seed);

}  // namespace snoe

#endif  // SNOE_SEM_HPP_
