#ifndef SNOE_SPLINE_HPP_
#define SNOE_SPLINE_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace snoe {

// One penalized cubic B-spline smooth f(x_col), centered over its training
// sample. Outside [xmin, xmax] the spline continues linearly (value and
// first derivative matched at the boundary).
struct SmoothTerm {
    int col = -1;
    std::string name;
    std::vector<double> knots;  // clamped knot vector (boundary knots x4)
    Eigen::VectorXd beta;
    double center = 0.0;
    double lambda = 0.0;
    double edf = 1.0;
    double xmin = 0.0, xmax = 0.0;
    bool dropped = false;  // constant training predictor; contributes 0

    double eval(double x) const;
};

struct AdditiveModel {
    double intercept = 0.0;
    double sigma2 = 1.0;
    double edf_total = 1.0;
    double rss = 0.0;
    int n_train = 0;
    int n_cols = 0;  // predictor columns the model was fit on
    std::vector<SmoothTerm> terms;
};

// Backfitted penalized least squares: per-term smoothing picked by GCV over
// a fixed log-spaced lambda grid, second-difference penalty over Greville
// sites (so exactly linear signals incur no penalty), two sweeps.
AdditiveModel fit_additive(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           const std::vector<std::string>& names = {});

Eigen::VectorXd predict(const AdditiveModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXd residuals(const AdditiveModel& m, const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

// Per-sample Gaussian log density with the model's training sigma2.
Eigen::VectorXd gaussian_loglik(const AdditiveModel& m, const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

// Approximate F-test for one smooth term: the model is refit without the
// term (fresh smoothing selection) and the RSS increase is referred to an
// F(edf_term, n - edf_full) distribution. y, X must be the training data.
double term_significance(const AdditiveModel& m, const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int term_index);

}  // namespace snoe

#endif  // SNOE_SPLINE_HPP_
