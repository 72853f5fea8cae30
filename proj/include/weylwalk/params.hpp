#pragma once

#include "weylwalk/chamber.hpp"
#include "weylwalk/field.hpp"

#include <cmath>
#include <sstream>

namespace weylwalk {

/// Parameters of the type B convolution family: rank q, field and the real
/// dimension parameter p. Valid strictly above the degenerate value 2q - 1.
struct BcParams {
    int q = 1;
    Field field = Field::real();
    double p = 2.0;

    BcParams() = default;
    BcParams(int q_, Field f, double p_) : q(q_), field(f), p(p_) { validate(); }

    void validate() const {
        if (q < 1) throw std::invalid_argument("q must be >= 1");
        if (!(p > 2.0 * q - 1.0)) {
            std::ostringstream os;
            os << "p must exceed 2q-1 = " << (2 * q - 1) << ", got p = " << p;
            throw std::invalid_argument(os.str());
        }
    }
};

/// Which convolution structure a walk or estimator lives on: the chamber of
/// type A over (q, F), or the type B chamber with parameters (q, F, p).
struct CaseParams {
    Chamber cs = Chamber::A;
    int q = 2;
    Field field = Field::real();
    double p = std::nan("");

    static CaseParams case_a(int q, Field f) {
        if (q < 1) throw std::invalid_argument("q must be >= 1");
        CaseParams c;
        c.cs = Chamber::A;
        c.q = q;
        c.field = f;
        return c;
    }
    static CaseParams case_bc(const BcParams& b) {
        b.validate();
        CaseParams c;
        c.cs = Chamber::B;
        c.q = b.q;
        c.field = b.field;
        c.p = b.p;
        return c;
    }

    BcParams bc() const {
        if (cs != Chamber::B) throw std::logic_error("not a BC-case parameter set");
        return BcParams(q, field, p);
    }
};

} // namespace weylwalk
