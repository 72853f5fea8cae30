#include "weylwalk/sampling.hpp"

#include "weylwalk/algebra.hpp"
#include "weylwalk/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace weylwalk;

namespace {
const Field kFields[] = {Field::real(), Field::complex_field(), Field::quaternion()};
}

TEST_CASE("haar_unitary is unitary to machine precision") {
    RngStream rng(30, 0);
    for (Field f : kFields)
        for (int q : {1, 2, 3, 5}) {
            for (int rep = 0; rep < 10; ++rep) {
                const MatrixF u = haar_unitary(q, f, rng);
                CHECK(unitary_defect(u) < 1e-12);
            }
        }
}

TEST_CASE("haar_unitary first entry has mean square 1/q") {
    for (Field f : kFields) {
        RngStream rng(31, f.d);
        const int q = 3, n = 100000;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += haar_unitary(q, f, rng).at(0, 0).norm2();
        // E|u11|^2 = 1/q with variance below 1/n per sample.
        CHECK(std::abs(s / n - 1.0 / q) < 4.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("haar first column matches a normalized Gaussian vector") {
    for (Field f : kFields) {
        RngStream rng(32, f.d);
        const int q = 3, n = 20000;
        std::vector<double> from_haar(n), from_gauss(n);
        for (int i = 0; i < n; ++i) from_haar[i] = haar_unitary(q, f, rng).at(0, 0).w;
        for (int i = 0; i < n; ++i) {
            double nrm2 = 0.0;
            std::vector<double> g(f.d * q);
            for (auto& v : g) {
                v = rng.normal();
                nrm2 += v * v;
            }
            from_gauss[i] = g[0] / std::sqrt(nrm2);
        }
        CHECK(ks_two_sample(from_haar, from_gauss).p_value > 0.001);
    }
}

TEST_CASE("haar invariance of minor laws under fixed left multiplication") {
    for (Field f : kFields) {
        RngStream rng(33, f.d);
        const int q = 3, n = 20000;
        Eigen::VectorXd x(q);
        x << 3.0, 1.0, 0.5;
        RngStream vr = rng.derive(7);
        const MatrixF v = haar_unitary(q, f, vr);
        std::vector<double> plain(n), shifted(n);
        for (int i = 0; i < n; ++i) {
            const MatrixF u = haar_unitary(q, f, rng);
            plain[i] = log_principal_minors(u.adjoint() * u.scale_rows(x))[0];
            const MatrixF vu = v * haar_unitary(q, f, rng);
            shifted[i] = log_principal_minors(vu.adjoint() * vu.scale_rows(x))[0];
        }
        CHECK(ks_two_sample(plain, shifted).p_value > 0.001);
    }
}

TEST_CASE("sampling is deterministic under identical seeds") {
    RngStream a(77, 5), b(77, 5);
    const MatrixF ua = haar_unitary(3, Field::quaternion(), a);
    const MatrixF ub = haar_unitary(3, Field::quaternion(), b);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(ua.at(i, j).w == ub.at(i, j).w);
            CHECK(ua.at(i, j).z == ub.at(i, j).z);
        }
    const MatrixF wa = sample_mp(BcParams(2, Field::real(), 4.0), a);
    const MatrixF wb = sample_mp(BcParams(2, Field::real(), 4.0), b);
    CHECK(wa.at(1, 0).w == wb.at(1, 0).w);
}

TEST_CASE("ball_point: uniform case q=1 d=1 a=0") {
    RngStream rng(34, 0);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = ball_point(1, Field::real(), 0.0, rng).at(0, 0).w;
        CHECK(std::abs(y) < 1.0);
        s1 += y;
        s2 += y * y;
    }
    CHECK(std::abs(s1 / n) < 4.0 * std::sqrt(1.0 / 3.0 / n));
    CHECK(std::abs(s2 / n - 1.0 / 3.0) < 4.0 * std::sqrt(0.2 / n));
}

TEST_CASE("ball_point radial law is Beta(dq/2, a+1)") {
    for (Field f : kFields) {
        RngStream rng(35, f.d);
        const int q = 2, n = 20000;
        const double a = 1.3;
        std::vector<double> r2(n);
        for (int i = 0; i < n; ++i) {
            const MatrixF y = ball_point(q, f, a, rng);
            double nrm2 = 0.0;
            for (int j = 0; j < q; ++j) nrm2 += y.at(0, j).norm2();
            CHECK(nrm2 < 1.0);
            r2[i] = nrm2;
        }
        const double shape1 = 0.5 * f.d * q, shape2 = a + 1.0;
        CHECK(ks_one_sample(r2, [&](double x) { return beta_cdf(x, shape1, shape2); }).p_value > 0.001);
    }
    RngStream bad(0, 0);
    CHECK_THROWS_AS(ball_point(2, Field::real(), -1.0, bad), std::invalid_argument);
}

TEST_CASE("p_map lands in the matrix ball and keeps the determinant") {
    for (Field f : kFields) {
        RngStream rng(36, f.d);
        const int q = 3;
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<MatrixF> ys;
            MatrixF stacked(f, q, q);
            for (int j = 0; j < q; ++j) {
                ys.push_back(ball_point(q, f, 0.5, rng));
                for (int c = 0; c < q; ++c) stacked.at(j, c) = ys.back().at(0, c);
            }
            const MatrixF w = p_map(ys);
            CHECK(largest_singular_value(w) <= 1.0 + 1e-12);
            CHECK(det_modulus(w) == doctest::Approx(det_modulus(stacked)).epsilon(1e-9));
        }
    }
}

TEST_CASE("sample_mp stays in the ball; q=1 exponent identity") {
    for (Field f : kFields) {
        RngStream rng(37, f.d);
        const BcParams bp(2, f, 2.0 * 2 - 1 + 0.7);  // inside the singular-density window
        for (int i = 0; i < 500; ++i)
            CHECK(largest_singular_value(sample_mp(bp, rng)) <= 1.0 + 1e-12);
    }
    // q=1: the radial exponent of the map equals the density exponent of m_p.
    for (double p : {1.5, 2.0, 4.0})
        for (Field f : kFields) {
            const BcParams bp(1, f, p);
            const double a1 = f.d * (bp.p - 1.0 + 1.0 - 1.0) / 2.0 - 1.0;
            CHECK(a1 == doctest::Approx(mp_exponent(bp)).epsilon(1e-12));
        }
}

TEST_CASE("rejection oracle basics") {
    RngStream rng(38, 0);
    const BcParams flat(1, Field::real(), 3.0);  // exponent 0: uniform on [-1,1]
    CHECK(mp_exponent(flat) == doctest::Approx(0.0));
    const int n = 20000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += sample_mp_rejection(flat, rng).at(0, 0).w;
    mean /= n;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(1.0 / 3.0 / n));
    // Unbounded density is refused.
    CHECK_THROWS_AS(sample_mp_rejection(BcParams(2, Field::real(), 3.5), rng),
                    std::invalid_argument);
}

TEST_CASE("sample_mp agrees with the rejection oracle") {
    RngStream rng(39, 0);
    const BcParams bp(2, Field::real(), 6.0);
    const int n = 6000;
    std::vector<double> a(n), b(n);
    RngStream r1 = rng.derive(1), r2 = rng.derive(2);
    for (int i = 0; i < n; ++i) a[i] = largest_singular_value(sample_mp(bp, r1));
    for (int i = 0; i < n; ++i) b[i] = largest_singular_value(sample_mp_rejection(bp, r2));
    CHECK(ks_two_sample(a, b).p_value > 0.001);
}
