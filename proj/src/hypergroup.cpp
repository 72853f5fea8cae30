#include "weylwalk/hypergroup.hpp"

#include "weylwalk/algebra.hpp"
#include "weylwalk/sampling.hpp"

#include <cmath>

namespace weylwalk {

DiscreteMeasure::DiscreteMeasure(std::vector<ChamberPoint> atoms_, std::vector<double> weights_)
    : atoms(std::move(atoms_)), weights(std::move(weights_)) {
    if (!atoms.empty()) chamber = atoms[0].chamber;
    validate();
}

DiscreteMeasure DiscreteMeasure::point_mass(const ChamberPoint& t) {
    return DiscreteMeasure({t}, {1.0});
}

void DiscreteMeasure::validate() const {
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("measure needs matching nonempty atoms and weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("measure weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("measure weights must sum to 1");
    for (const auto& t : atoms) {
        t.validate();
        if (t.chamber != chamber || t.q() != atoms[0].q())
            throw std::invalid_argument("measure atoms must share chamber and q");
    }
}

ChamberPoint conv_step_A(const ChamberPoint& s, const ChamberPoint& t, Field field, RngStream& rng) {
    if (s.chamber != Chamber::A || t.chamber != Chamber::A || s.q() != t.q())
        throw std::invalid_argument("conv_step_A: arguments must be type A points of equal q");
    // 0 is the hypergroup identity; singular values are unitarily invariant,
    // so the formula returns the other point for every draw.
    if (s.is_zero()) return t;
    if (t.is_zero()) return s;
    const MatrixF u = haar_unitary(s.q(), field, rng);
    const Eigen::VectorXd ls = log_singular_spectrum(u, s.v, t.v);
    return ChamberPoint(Chamber::A, ls);
}

ChamberPoint conv_step_BC(const ChamberPoint& s, const ChamberPoint& t, const BcParams& params,
                          RngStream& rng) {
    if (s.chamber != Chamber::B || t.chamber != Chamber::B || s.q() != t.q() || s.q() != params.q)
        throw std::invalid_argument("conv_step_BC: arguments must be type B points matching params");
    if (s.is_zero()) return t;
    if (t.is_zero()) return s;
    const int q = params.q;
    const MatrixF v = haar_unitary(q, params.field, rng);
    const MatrixF w = sample_mp(params, rng);
    // Factor cosh out of rows (t) and columns (s):
    //   sinh t w sinh s + cosh t v cosh s
    //     = cosh t (tanh t w tanh s + v) cosh s.
    Eigen::VectorXd tanh_t(q), tanh_s(q), row_log(q), col_log(q);
    for (int i = 0; i < q; ++i) {
        tanh_t[i] = std::tanh(t.v[i]);
        tanh_s[i] = std::tanh(s.v[i]);
        row_log[i] = log_cosh(t.v[i]);
        col_log[i] = log_cosh(s.v[i]);
    }
    const MatrixF core = w.scale_rows(tanh_t).scale_cols(tanh_s) + v;
    Eigen::VectorXd ls = log_singular_spectrum(core, row_log, col_log);
    Eigen::VectorXd out(q);
    const double clamp_low = std::log1p(-1e-9);
    for (int i = 0; i < q; ++i) {
        double l = ls[i];
        if (l < 0.0) {
            if (l < clamp_low)
                throw std::domain_error("conv_step_BC: singular value below arcosh domain");
            l = 0.0;
        }
        out[i] = arcosh_from_log(l);
    }
    return ChamberPoint(Chamber::B, out);
}

ChamberPoint conv_step(const ChamberPoint& s, const ChamberPoint& t, const CaseParams& params,
                       RngStream& rng) {
    if (params.cs == Chamber::A) return conv_step_A(s, t, params.field, rng);
    return conv_step_BC(s, t, params.bc(), rng);
}

const ChamberPoint& measure_sample(const DiscreteMeasure& nu, RngStream& rng) {
    if (nu.atoms.size() == 1) return nu.atoms[0];
    const double u = rng.uniform();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < nu.atoms.size(); ++i) {
        acc += nu.weights[i];
        if (u < acc) return nu.atoms[i];
    }
    return nu.atoms.back();
}

Trajectory walk(const DiscreteMeasure& nu, int k, const CaseParams& params, RngStream& rng) {
    if (k < 0) throw std::invalid_argument("walk: k must be >= 0");
    nu.validate();
    if (nu.chamber != params.cs || nu.q() != params.q)
        throw std::invalid_argument("walk: measure does not match params");
    Trajectory tr;
    tr.params = params;
    tr.master_seed = rng.master_seed();
    tr.stream_id = rng.stream_id();
    tr.points.reserve(k + 1);
    tr.points.push_back(ChamberPoint::zero(params.cs, params.q));
    for (int i = 0; i < k; ++i) {
        const ChamberPoint& step = measure_sample(nu, rng);
        tr.points.push_back(conv_step(tr.points.back(), step, params, rng));
    }
    return tr;
}

} // namespace weylwalk
