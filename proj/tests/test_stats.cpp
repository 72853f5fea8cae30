#include "weylwalk/stats.hpp"

#include "weylwalk/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace weylwalk;

TEST_CASE("kolmogorov survival function known values") {
    CHECK(kolmogorov_q(1.0) == doctest::Approx(0.2699996).epsilon(1e-5));
    CHECK(kolmogorov_q(0.5) == doctest::Approx(0.9639452436).epsilon(1e-6));
    CHECK(kolmogorov_q(2.0) < 1e-3);
    CHECK(kolmogorov_q(0.0) == 1.0);
}

TEST_CASE("ks_two_sample: identical and disjoint samples") {
    std::vector<double> x, y;
    RngStream rng(1, 0);
    for (int i = 0; i < 5000; ++i) x.push_back(rng.normal());
    y = x;
    const TestResult same = ks_two_sample(x, y);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value > 0.999);

    std::vector<double> lo, hi;
    for (int i = 0; i < 2000; ++i) {
        lo.push_back(rng.uniform());
        hi.push_back(rng.uniform() + 10.0);
    }
    CHECK(ks_two_sample(lo, hi).p_value < 1e-6);
}

TEST_CASE("ks_two_sample calibration: null p-values not clustered low") {
    // N(0,1) vs N(0,1) across 10 seeds: at most one p below 0.05.
    int low = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        RngStream rng(seed, 99);
        std::vector<double> x(3000), y(3000);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        if (ks_two_sample(x, y).p_value < 0.05) ++low;
    }
    CHECK(low <= 1);
}

TEST_CASE("ks_one_sample against the true law") {
    RngStream rng(2, 0);
    std::vector<double> u(20000);
    for (auto& v : u) v = rng.uniform();
    CHECK(ks_one_sample(u, [](double x) { return std::min(1.0, std::max(0.0, x)); }).p_value > 0.001);

    std::vector<double> g(20000);
    for (auto& v : g) v = rng.normal();
    CHECK(ks_one_sample(g, [](double x) { return normal_cdf(x); }).p_value > 0.001);
}

TEST_CASE("chi2 and beta distribution functions") {
    CHECK(chi2_cdf(0.0, 3.0) == 0.0);
    // Known quantile: P(chi2_2 <= 5.991) = 0.95.
    CHECK(chi2_cdf(5.991464547, 2.0) == doctest::Approx(0.95).epsilon(1e-6));
    CHECK(gamma_p(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(beta_cdf(0.5, 2.5, 2.5) == doctest::Approx(0.5).epsilon(1e-10));
    // Symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    CHECK(beta_inc(1.7, 3.1, 0.3) == doctest::Approx(1.0 - beta_inc(3.1, 1.7, 0.7)).epsilon(1e-10));
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963985, 0.0, 1.0) == doctest::Approx(0.975).epsilon(1e-6));
}

TEST_CASE("mahalanobis_chi2 on standard normal rows") {
    RngStream rng(3, 0);
    const int n = 5000, q = 3;
    Eigen::MatrixXd z(n, q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < q; ++j) z(i, j) = rng.normal();
    const TestResult r = mahalanobis_chi2(z, Eigen::MatrixXd::Identity(q, q));
    CHECK(!r.degenerate);
    CHECK(r.p_value > 0.001);

    Eigen::MatrixXd sing = Eigen::MatrixXd::Identity(q, q);
    sing(q - 1, q - 1) = 0.0;
    CHECK(mahalanobis_chi2(z, sing).degenerate);
}

TEST_CASE("fit_slope recovers an exact line") {
    std::vector<double> x = {1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(3.0 - 2.0 * v);
    const SlopeFit f = fit_slope(x, y);
    CHECK(f.slope == doctest::Approx(-2.0));
    CHECK(f.intercept == doctest::Approx(3.0));
    CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-12));
}
