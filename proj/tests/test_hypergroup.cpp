#include "weylwalk/hypergroup.hpp"

#include "weylwalk/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace weylwalk;

namespace {

ChamberPoint pt(Chamber c, std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<int>(v.size()));
    int i = 0;
    for (double d : v) x[i++] = d;
    return ChamberPoint(c, x);
}

} // namespace

TEST_CASE("measure validation and sampling frequencies") {
    CHECK_THROWS_AS(DiscreteMeasure({pt(Chamber::B, {1.0})}, {0.5}), std::invalid_argument);
    const DiscreteMeasure single = DiscreteMeasure::point_mass(pt(Chamber::B, {1.0, 0.5}));
    RngStream rng(40, 0);
    for (int i = 0; i < 100; ++i) CHECK(measure_sample(single, rng).v[0] == 1.0);

    const DiscreteMeasure even({pt(Chamber::B, {1.0}), pt(Chamber::B, {2.0})}, {0.5, 0.5});
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        if (measure_sample(even, rng).v[0] == 1.0) ++hits;
    CHECK(std::abs(hits / double(n) - 0.5) < 4.0 * 0.5 / std::sqrt(double(n)));

    const DiscreteMeasure skew({pt(Chamber::B, {1.0}), pt(Chamber::B, {2.0})}, {0.3, 0.7});
    hits = 0;
    for (int i = 0; i < n; ++i)
        if (measure_sample(skew, rng).v[0] == 1.0) ++hits;
    CHECK(std::abs(hits / double(n) - 0.3) < 4.0 * std::sqrt(0.21 / double(n)));
}

TEST_CASE("conv_step_A: identity, log-determinant additivity") {
    RngStream rng(41, 0);
    const ChamberPoint s = pt(Chamber::A, {1.5, 0.2}), t = pt(Chamber::A, {0.8, -0.4});
    const ChamberPoint id0 = ChamberPoint::zero(Chamber::A, 2);
    for (Field f : {Field::real(), Field::complex_field(), Field::quaternion()}) {
        const ChamberPoint r1 = conv_step_A(id0, t, f, rng);
        CHECK(r1.v == t.v);  // exact identity element
        const ChamberPoint r2 = conv_step_A(s, id0, f, rng);
        CHECK(r2.v == s.v);
        for (int i = 0; i < 200; ++i) {
            const ChamberPoint out = conv_step_A(s, t, f, rng);
            CHECK(out.v.sum() == doctest::Approx(s.v.sum() + t.v.sum()).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(conv_step_A(s, pt(Chamber::A, {1.0}), Field::real(), rng),
                    std::invalid_argument);
}

TEST_CASE("conv_step_BC: identity, support bound") {
    RngStream rng(42, 0);
    const BcParams bp(2, Field::real(), 3.5);
    const ChamberPoint s = pt(Chamber::B, {1.0, 0.3}), t = pt(Chamber::B, {0.7, 0.0});
    const ChamberPoint zero = ChamberPoint::zero(Chamber::B, 2);
    CHECK(conv_step_BC(zero, t, bp, rng).v == t.v);
    CHECK(conv_step_BC(s, zero, bp, rng).v == s.v);
    CHECK(conv_step_BC(zero, zero, bp, rng).v == zero.v);
    for (int i = 0; i < 20000; ++i) {
        const ChamberPoint out = conv_step_BC(s, t, bp, rng);
        CHECK(out.v[0] <= s.v[0] + t.v[0] + 1e-9);
        CHECK(out.v[1] >= 0.0);
    }
}

TEST_CASE("conv_step_BC commutativity in law") {
    RngStream rng(43, 0);
    const BcParams bp(2, Field::real(), 4.5);
    const ChamberPoint s = pt(Chamber::B, {1.2, 0.4}), t = pt(Chamber::B, {0.9, 0.1});
    const int n = 20000;
    for (int coord = 0; coord < 2; ++coord) {
        std::vector<double> st(n), ts(n);
        RngStream r1 = rng.derive(coord * 2), r2 = rng.derive(coord * 2 + 1);
        for (int i = 0; i < n; ++i) {
            st[i] = conv_step_BC(s, t, bp, r1).v[coord];
            ts[i] = conv_step_BC(t, s, bp, r2).v[coord];
        }
        CHECK(ks_two_sample(st, ts).p_value > 0.001);
    }
}

TEST_CASE("conv_step_BC associativity in law (nested sampling)") {
    RngStream rng(44, 0);
    const BcParams bp(2, Field::real(), 4.0);
    const ChamberPoint r = pt(Chamber::B, {0.8, 0.2}), s = pt(Chamber::B, {1.1, 0.5}),
                       t = pt(Chamber::B, {0.6, 0.0});
    const int n = 20000;
    for (int coord = 0; coord < 2; ++coord) {
        std::vector<double> left(n), right(n);
        RngStream r1 = rng.derive(coord * 2), r2 = rng.derive(coord * 2 + 1);
        for (int i = 0; i < n; ++i) {
            left[i] = conv_step_BC(conv_step_BC(r, s, bp, r1), t, bp, r1).v[coord];
            right[i] = conv_step_BC(r, conv_step_BC(s, t, bp, r2), bp, r2).v[coord];
        }
        CHECK(ks_two_sample(left, right).p_value > 0.001);
    }
}

TEST_CASE("walk basics") {
    RngStream rng(45, 0);
    const BcParams bp(2, Field::real(), 3.5);
    const CaseParams params = CaseParams::case_bc(bp);
    const DiscreteMeasure nu({pt(Chamber::B, {1.0, 0.3}), pt(Chamber::B, {2.0, 1.0})}, {0.5, 0.5});

    const Trajectory t0 = walk(nu, 0, params, rng);
    CHECK(t0.points.size() == 1);
    CHECK(t0.points[0].v.cwiseAbs().maxCoeff() == 0.0);

    // Point mass at the identity stays at the identity exactly.
    const DiscreteMeasure dirac0 = DiscreteMeasure::point_mass(ChamberPoint::zero(Chamber::B, 2));
    const Trajectory tz = walk(dirac0, 25, params, rng);
    for (const auto& p : tz.points) CHECK(p.v.cwiseAbs().maxCoeff() == 0.0);

    // k = 1: endpoint distributed as nu itself (identity convolution).
    const int n = 20000;
    std::vector<double> endpoint(n), direct(n);
    RngStream r1 = rng.derive(1), r2 = rng.derive(2);
    for (int i = 0; i < n; ++i) {
        endpoint[i] = walk(nu, 1, params, r1).points[1].v[0];
        direct[i] = measure_sample(nu, r2).v[0];
    }
    CHECK(ks_two_sample(endpoint, direct).p_value > 0.001);
}

TEST_CASE("A-case walk: coordinate sum is an exact classical random walk") {
    RngStream rng(46, 0);
    const CaseParams params = CaseParams::case_a(2, Field::real());
    // Both atoms share the coordinate sum 1.3, so the endpoint sum is exact.
    const DiscreteMeasure nu({pt(Chamber::A, {1.0, 0.3}), pt(Chamber::A, {1.8, -0.5})}, {0.5, 0.5});
    const int k = 50;
    for (int rep = 0; rep < 20; ++rep) {
        const Trajectory tr = walk(nu, k, params, rng);
        CHECK(tr.points.back().v.sum() == doctest::Approx(k * 1.3).epsilon(1e-9));
    }
}

TEST_CASE("walks are reproducible from the stream") {
    RngStream a(47, 3), b(47, 3);
    const CaseParams params = CaseParams::case_bc(BcParams(2, Field::complex_field(), 4.0));
    const DiscreteMeasure nu({pt(Chamber::B, {1.0, 0.3}), pt(Chamber::B, {2.0, 1.0})}, {0.5, 0.5});
    const Trajectory ta = walk(nu, 20, params, a);
    const Trajectory tb = walk(nu, 20, params, b);
    for (size_t i = 0; i < ta.points.size(); ++i) CHECK(ta.points[i].v == tb.points[i].v);
}
