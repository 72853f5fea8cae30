#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace weylwalk {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false;
};

/// Survival function of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{j-1} e^{-2 j^2 x^2}.
double kolmogorov_q(double x);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
TestResult ks_two_sample(std::vector<double> x, std::vector<double> y);

/// One-sample Kolmogorov-Smirnov test against a CDF.
TestResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

/// Mahalanobis goodness-of-fit: squared distances of the rows of z under
/// sigma, compared to the chi-square law with q degrees of freedom by a
/// one-sample KS test. Eigenvalues of sigma below 1e-10 * trace flag the
/// input as degenerate.
TestResult mahalanobis_chi2(const Eigen::MatrixXd& z, const Eigen::MatrixXd& sigma);

// Distribution functions used by the tests above and by the samplers' checks.
double normal_cdf(double x, double mean = 0.0, double sd = 1.0);
double chi2_cdf(double x, double dof);
double beta_cdf(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

/// Ordinary least squares fit y = a + b x; returns the slope, its standard
/// error and the intercept.
struct SlopeFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace weylwalk
