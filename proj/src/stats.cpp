#include "weylwalk/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weylwalk {

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 0.2) return 1.0;  // series converges too slowly and Q is ~1 anyway
    double s = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        s += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * s));
}

namespace {

// Marsaglia's effective-n correction for the asymptotic KS p-value.
double ks_p_from_stat(double d, double n_eff) {
    const double rn = std::sqrt(n_eff);
    return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

} // namespace

TestResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const size_t n = x.size(), m = y.size();
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n && j < m) {
        const double v = std::min(x[i], y[j]);
        while (i < n && x[i] <= v) ++i;
        while (j < m && y[j] <= v) ++j;
        d = std::max(d, std::abs(double(i) / n - double(j) / m));
    }
    TestResult r;
    r.statistic = d;
    r.p_value = ks_p_from_stat(d, double(n) * m / double(n + m));
    return r;
}

TestResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(x.begin(), x.end());
    const size_t n = x.size();
    double d = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double f = cdf(x[i]);
        d = std::max(d, std::max(double(i + 1) / n - f, f - double(i) / n));
    }
    TestResult r;
    r.statistic = d;
    r.p_value = ks_p_from_stat(d, double(n));
    return r;
}

TestResult mahalanobis_chi2(const Eigen::MatrixXd& z, const Eigen::MatrixXd& sigma) {
    const int q = static_cast<int>(sigma.rows());
    if (sigma.cols() != q || z.cols() != q) throw std::invalid_argument("mahalanobis_chi2: shape mismatch");
    if (z.rows() == 0) throw std::invalid_argument("mahalanobis_chi2: empty sample");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    const double floor = 1e-10 * std::max(sigma.trace(), 0.0);
    TestResult r;
    if (es.eigenvalues().minCoeff() <= floor) {
        r.degenerate = true;
        return r;
    }
    const Eigen::MatrixXd inv = es.eigenvectors() *
                                es.eigenvalues().cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
    std::vector<double> d2(z.rows());
    for (int i = 0; i < z.rows(); ++i) d2[i] = z.row(i) * inv * z.row(i).transpose();
    const double dof = q;
    return ks_one_sample(std::move(d2), [dof](double v) { return chi2_cdf(v, dof); });
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double chi2_cdf(double x, double dof) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * dof, 0.5 * x);
}

double beta_cdf(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return beta_inc(a, b, x);
}

double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        // Series representation.
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Continued fraction for Q(a, x), modified Lentz.
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

namespace {

double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h;
}

} // namespace

double beta_inc(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta_inc: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n != y.size() || n < 3) throw std::invalid_argument("fit_slope: need >= 3 matching points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.slope_se = std::sqrt(ss / double(n - 2) / sxx);
    return f;
}

} // namespace weylwalk
