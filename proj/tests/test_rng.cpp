#include "weylwalk/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace weylwalk;

TEST_CASE("identical seeds reproduce identical sequences") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream ids decorrelate") {
    RngStream a(42, 0), b(42, 1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("derive is independent of call order and of the parent's position") {
    RngStream parent(5, 3);
    RngStream d1 = parent.derive(11);
    parent.next_u64();
    RngStream d2 = parent.derive(11);
    CHECK(d1.next_u64() == d2.next_u64());
}

TEST_CASE("uniform range and mean") {
    RngStream r(1, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("normal moments") {
    RngStream r(2, 0);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s1 += x;
        s2 += x * x;
    }
    CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("gamma mean and variance") {
    RngStream r(3, 0);
    const double alpha = 2.7;
    const int n = 50000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.gamma(alpha);
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - alpha) < 5.0 * std::sqrt(alpha / n));
    CHECK(std::abs(var - alpha) / alpha < 0.1);
}

TEST_CASE("beta mean") {
    RngStream r(4, 0);
    const double a = 1.5, b = 3.5;
    const int n = 50000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.beta(a, b);
    const double mean = a / (a + b);
    const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    CHECK(std::abs(s / n - mean) < 5.0 * std::sqrt(var / n));
}
