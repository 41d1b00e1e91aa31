#ifndef SNOE_STATS_HPP_
#define SNOE_STATS_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "snoe/dataset.hpp"

namespace snoe {

struct DegenerateColumnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CiTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double pcor = 0.0;
    int cond_size = 0;
};

// Standard normal CDF.
double normal_cdf(double z);

// Partial-correlation CI test of columns i, j given S: Fisher transform of
// the precision-matrix entry over the correlation submatrix of {i,j} u S,
// statistic sqrt(n-|S|-3) * Z, two-sided normal p-value.
CiTestResult fisher_z_test(const DataMatrix& data, int i, int j, const std::vector<int>& S);
CiTestResult fisher_z_test(const Eigen::MatrixXd& values, int i, int j, const std::vector<int>& S);

struct Discretized {
    std::vector<int> labels;
    std::vector<double> edges;  // interior cut points (left-open bins)
    int levels = 0;
    bool degenerate = false;    // constant column collapsed to one level
};

// Equal-frequency binning; bins == 0 picks clamp(floor(n^(1/3)), 4, 16).
// Duplicate quantile edges collapse, which can reduce the level count.
Discretized discretize(const Eigen::VectorXd& x, int bins = 0);

struct DiscreteJoint {
    std::vector<std::vector<long>> counts;  // A x B
    long n = 0;
};

DiscreteJoint joint_counts(const Discretized& x, const Discretized& y);

// Plug-in estimators in nats; 0 log 0 = 0.
double mutual_information(const DiscreteJoint& j);
double entropy(const std::vector<int>& labels, int levels);

// MI(x,y) / min(H(x), H(y)) after discretizing both columns, clamped to
// [0,1]. Throws DegenerateColumnError when either column is constant.
double normalized_mi(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int bins = 0);

}  // namespace snoe

#endif  // SNOE_STATS_HPP_
