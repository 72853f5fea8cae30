#include "weylwalk/spectral.hpp"

#include "weylwalk/algebra.hpp"
#include "weylwalk/parallel.hpp"
#include "weylwalk/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace weylwalk {

SpectralParams SpectralParams::case_a(int q, Field field) {
    SpectralParams sp;
    sp.cp = CaseParams::case_a(q, field);
    sp.rho = rho_A(q, field);
    return sp;
}

SpectralParams SpectralParams::case_bc(const BcParams& params) {
    SpectralParams sp;
    sp.cp = CaseParams::case_bc(params);
    sp.rho = rho_BC(params);
    return sp;
}

Eigen::VectorXd rho_A(int q, Field field) {
    if (q < 2) throw std::invalid_argument("rho_A: q must be >= 2");
    Eigen::VectorXd rho(q);
    for (int l = 1; l <= q; ++l) rho[l - 1] = 0.5 * field.d * (q + 1 - 2 * l);
    return rho;
}

Eigen::VectorXd rho_BC(const BcParams& params) {
    params.validate();
    Eigen::VectorXd rho(params.q);
    for (int i = 1; i <= params.q; ++i)
        rho[i - 1] = 0.5 * params.field.d * (params.p + params.q + 2 - 2 * i) - 1.0;
    return rho;
}

Eigen::MatrixXd sample_log_minors(const ChamberPoint& t, const CaseParams& cp, int n,
                                  const RngStream& rng, int workers) {
    if (n < 1) throw std::invalid_argument("sample_log_minors: n must be >= 1");
    if (t.chamber != cp.cs || t.q() != cp.q)
        throw std::invalid_argument("sample_log_minors: point does not match params");
    const int q = cp.q;
    Eigen::MatrixXd out(n, q);

    if (cp.cs == Chamber::A) {
        if (t.is_diagonal()) {
            // u^* e^{2c} I u = e^{2c} I for every unitary u.
            for (int r = 0; r < q; ++r) out.col(r).setConstant(2.0 * (r + 1) * t.v[0]);
            return out;
        }
        parallel_for(n, workers, [&](size_t i) {
            RngStream sub = rng.derive(i);
            const MatrixF u = haar_unitary(q, cp.field, sub);
            // u^* e^{2t} u is the Gram matrix of e^{t} u.
            const Eigen::VectorXd lm = log_gram_minors(t.v, u);
            for (int r = 0; r < q; ++r) out(static_cast<int>(i), r) = lm[r];
        });
        return out;
    }

    // BC case.
    const BcParams bp = cp.bc();
    if (t.is_zero()) {
        out.setZero();
        return out;
    }
    Eigen::VectorXd tanh_t(q), logcosh_t(q);
    for (int i = 0; i < q; ++i) {
        tanh_t[i] = std::tanh(t.v[i]);
        logcosh_t[i] = log_cosh(t.v[i]);
    }
    parallel_for(n, workers, [&](size_t i) {
        RngStream sub = rng.derive(i);
        const MatrixF u = haar_unitary(q, cp.field, sub);
        const MatrixF w = sample_mp(bp, sub);
        // g(t,u,w) is the Gram matrix of (cosh t + sinh t w)^* u
        //   = (I + w^* tanh t) cosh t u.
        MatrixF a = w.adjoint().scale_cols(tanh_t);
        for (int r = 0; r < q; ++r) a.at(r, r) += FScalar(1.0);
        const Eigen::VectorXd lm = log_gram_minors(a, logcosh_t, u);
        for (int r = 0; r < q; ++r) out(static_cast<int>(i), r) = lm[r];
    });
    return out;
}

namespace {

// Half-log-minor ratio vectors, one row per sample.
Eigen::MatrixXd to_f(const Eigen::MatrixXd& log_minors) {
    Eigen::MatrixXd f = log_minors;
    for (int c = static_cast<int>(f.cols()) - 1; c >= 1; --c) f.col(c) -= f.col(c - 1);
    return f * 0.5;
}

void mean_and_se(const Eigen::VectorXd& x, double& mean, double& se) {
    const auto n = x.size();
    // A degenerate sample has mean x[0] and spread 0 exactly; the two-pass
    // formula would only blur that with accumulation rounding.
    bool all_equal = true;
    for (Eigen::Index i = 1; i < n && all_equal; ++i) all_equal = x[i] == x[0];
    if (all_equal) {
        mean = x[0];
        se = 0.0;
        return;
    }
    mean = x.mean();
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        ss += d * d;
    }
    se = n > 1 ? std::sqrt(ss / (double(n) * double(n - 1))) : 0.0;
}

} // namespace

ComplexEstimate spherical(const Eigen::VectorXcd& lambda, const ChamberPoint& t,
                          const SpectralParams& sp, int n_mc, const RngStream& rng, int workers) {
    if (n_mc < 2) throw std::invalid_argument("spherical: n_mc must be >= 2");
    const int q = sp.cp.q;
    if (lambda.size() != q) throw std::invalid_argument("spherical: lambda size mismatch");
    // Power-function exponent mu = (i lambda - rho)/2, as difference coefficients.
    Eigen::VectorXcd mu(q);
    for (int r = 0; r < q; ++r)
        mu[r] = 0.5 * (std::complex<double>(0.0, 1.0) * lambda[r] - sp.rho[r]);
    Eigen::VectorXcd coef(q);
    for (int r = 0; r < q; ++r) coef[r] = mu[r] - (r + 1 < q ? mu[r + 1] : std::complex<double>(0.0));

    const Eigen::MatrixXd lm = sample_log_minors(t, sp.cp, n_mc, rng, workers);
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n_mc);
    for (int r = 0; r < q; ++r) {
        if (coef[r] != std::complex<double>(0.0)) z += coef[r] * lm.col(r);
    }
    ComplexEstimate est;
    est.n = static_cast<size_t>(n_mc);
    bool all_equal = true;
    for (int i = 1; i < n_mc && all_equal; ++i) all_equal = z[i] == z[0];
    if (all_equal) {
        est.value = std::exp(z[0]);
        est.se = 0.0;
        return est;
    }
    // Shift by the largest real part before exponentiating.
    double shift = 0.0;
    for (int i = 0; i < n_mc; ++i) shift = std::max(shift, z[i].real());
    std::complex<double> sum(0.0, 0.0);
    Eigen::VectorXcd vals(n_mc);
    for (int i = 0; i < n_mc; ++i) {
        vals[i] = std::exp(z[i] - shift);
        sum += vals[i];
    }
    const std::complex<double> mean = sum / double(n_mc);
    double ss = 0.0;
    for (int i = 0; i < n_mc; ++i) ss += std::norm(vals[i] - mean);
    est.value = std::exp(shift) * mean;
    est.se = std::exp(shift) * std::sqrt(ss / (double(n_mc) * double(n_mc - 1)));
    return est;
}

ScalarEstimate moment(const MomentIndex& l, const ChamberPoint& t, const SpectralParams& sp,
                      int n_mc, const RngStream& rng, int workers) {
    if (n_mc < 2) throw std::invalid_argument("moment: n_mc must be >= 2");
    if (l.l.size() != sp.cp.q) throw std::invalid_argument("moment: index size mismatch");
    if (l.order() > 2) throw std::invalid_argument("moment: built-in estimators cover |l| <= 2");
    const Eigen::MatrixXd f = to_f(sample_log_minors(t, sp.cp, n_mc, rng, workers));
    Eigen::VectorXd vals = Eigen::VectorXd::Ones(n_mc);
    for (int r = 0; r < sp.cp.q; ++r)
        for (int k = 0; k < l.l[r]; ++k) vals = vals.cwiseProduct(f.col(r));
    ScalarEstimate est;
    est.n = static_cast<size_t>(n_mc);
    mean_and_se(vals, est.value, est.se);
    return est;
}

LocalMoments local_moments(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                           const RngStream& rng, int workers) {
    if (n_mc < 2) throw std::invalid_argument("local_moments: n_mc must be >= 2");
    const int q = sp.cp.q;
    const Eigen::MatrixXd f = to_f(sample_log_minors(t, sp.cp, n_mc, rng, workers));
    LocalMoments lm;
    lm.m1.value.resize(q);
    lm.m1.se.resize(q);
    lm.m1.n = lm.m2.n = lm.sigma2.n = static_cast<size_t>(n_mc);
    for (int r = 0; r < q; ++r) mean_and_se(f.col(r), lm.m1.value[r], lm.m1.se[r]);
    lm.m2.value.resize(q, q);
    lm.m2.se.resize(q, q);
    lm.sigma2.value.resize(q, q);
    lm.sigma2.se.resize(q, q);
    for (int r = 0; r < q; ++r)
        for (int s = r; s < q; ++s) {
            double mv, mse;
            mean_and_se(f.col(r).cwiseProduct(f.col(s)), mv, mse);
            lm.m2.value(r, s) = lm.m2.value(s, r) = mv;
            lm.m2.se(r, s) = lm.m2.se(s, r) = mse;
            // Centered products: their mean is exactly the empirical covariance.
            const Eigen::VectorXd cr = f.col(r).array() - lm.m1.value[r];
            const Eigen::VectorXd cs = f.col(s).array() - lm.m1.value[s];
            double cv, cse;
            mean_and_se(cr.cwiseProduct(cs), cv, cse);
            lm.sigma2.value(r, s) = lm.sigma2.value(s, r) = cv;
            lm.sigma2.se(r, s) = lm.sigma2.se(s, r) = cse;
        }
    return lm;
}

VectorEstimate m1_vec(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                      const RngStream& rng, int workers) {
    return local_moments(t, sp, n_mc, rng, workers).m1;
}
MatrixEstimate m2_mat(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                      const RngStream& rng, int workers) {
    return local_moments(t, sp, n_mc, rng, workers).m2;
}
MatrixEstimate sigma2_local(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                            const RngStream& rng, int workers) {
    return local_moments(t, sp, n_mc, rng, workers).sigma2;
}

MeasureMoments measure_moments(const DiscreteMeasure& nu, const SpectralParams& sp, int n_mc,
                               const RngStream& rng, int workers) {
    nu.validate();
    if (nu.chamber != sp.cp.cs || nu.q() != sp.cp.q)
        throw std::invalid_argument("measure_moments: measure does not match params");
    const int q = sp.cp.q;
    MeasureMoments mm;
    mm.m1.value = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd m1_var = Eigen::VectorXd::Zero(q);
    mm.m2_integral.value = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd m2_var = Eigen::MatrixXd::Zero(q, q);
    mm.m1.n = mm.m2_integral.n = mm.sigma2.n = static_cast<size_t>(n_mc) * nu.atoms.size();
    for (size_t i = 0; i < nu.atoms.size(); ++i) {
        const LocalMoments lm = local_moments(nu.atoms[i], sp, n_mc, rng.derive(i), workers);
        const double w = nu.weights[i];
        mm.m1.value += w * lm.m1.value;
        m1_var += (w * w) * lm.m1.se.cwiseProduct(lm.m1.se);
        mm.m2_integral.value += w * lm.m2.value;
        m2_var += (w * w) * lm.m2.se.cwiseProduct(lm.m2.se);
    }
    mm.m1.se = m1_var.cwiseSqrt();
    mm.m2_integral.se = m2_var.cwiseSqrt();
    mm.sigma2.value = mm.m2_integral.value - mm.m1.value * mm.m1.value.transpose();
    // First-order propagation through the outer-product correction.
    mm.sigma2.se.resize(q, q);
    for (int r = 0; r < q; ++r)
        for (int s = 0; s < q; ++s) {
            const double outer = mm.m1.value[s] * mm.m1.se[r] + mm.m1.value[r] * mm.m1.se[s];
            mm.sigma2.se(r, s) = std::sqrt(m2_var(r, s) + outer * outer);
        }
    return mm;
}

VectorEstimate dispersion(const DiscreteMeasure& nu, const SpectralParams& sp, int n_mc,
                          const RngStream& rng, int workers) {
    return measure_moments(nu, sp, n_mc, rng, workers).m1;
}

MatrixEstimate covariance(const DiscreteMeasure& nu, const SpectralParams& sp, int n_mc,
                          const RngStream& rng, int workers) {
    return measure_moments(nu, sp, n_mc, rng, workers).sigma2;
}

ComplexEstimate fourier_transform(const DiscreteMeasure& nu, const Eigen::VectorXd& lambda,
                                  const SpectralParams& sp, int n_mc, const RngStream& rng,
                                  int workers) {
    nu.validate();
    if (lambda.size() != sp.cp.q) throw std::invalid_argument("fourier_transform: lambda size mismatch");
    Eigen::VectorXcd spectral_param(sp.cp.q);
    for (int r = 0; r < sp.cp.q; ++r)
        spectral_param[r] = std::complex<double>(-lambda[r], -sp.rho[r]);
    ComplexEstimate est;
    est.value = 0.0;
    double var = 0.0;
    for (size_t i = 0; i < nu.atoms.size(); ++i) {
        const ComplexEstimate e = spherical(spectral_param, nu.atoms[i], sp, n_mc, rng.derive(i), workers);
        est.value += nu.weights[i] * e.value;
        var += nu.weights[i] * nu.weights[i] * e.se * e.se;
        est.n += e.n;
    }
    est.se = std::sqrt(var);
    return est;
}

OscillationResidual oscillation_residual(const ChamberPoint& t, const Eigen::VectorXd& lambda,
                                         const SpectralParams& sp, int n_mc, const RngStream& rng,
                                         int workers) {
    if (lambda.size() != sp.cp.q) throw std::invalid_argument("oscillation_residual: lambda size mismatch");
    const Eigen::MatrixXd f = to_f(sample_log_minors(t, sp.cp, n_mc, rng, workers));
    std::complex<double> phi(0.0, 0.0);
    Eigen::VectorXd m1 = Eigen::VectorXd::Zero(sp.cp.q);
    for (int i = 0; i < n_mc; ++i) {
        const double phase = lambda.dot(Eigen::VectorXd(f.row(i)));
        phi += std::exp(std::complex<double>(0.0, -phase));
        m1 += f.row(i).transpose();
    }
    phi /= double(n_mc);
    m1 /= double(n_mc);
    double ss = 0.0;
    for (int i = 0; i < n_mc; ++i) {
        const double phase = lambda.dot(Eigen::VectorXd(f.row(i)));
        ss += std::norm(std::exp(std::complex<double>(0.0, -phase)) - phi);
    }
    OscillationResidual r;
    r.n = static_cast<size_t>(n_mc);
    r.residual = std::abs(phi - std::exp(std::complex<double>(0.0, -lambda.dot(m1))));
    r.phi_se = std::sqrt(ss / (double(n_mc) * double(n_mc - 1)));
    return r;
}

std::vector<std::pair<double, double>> eigenvalues_with_stderr(const MatrixEstimate& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.value);
    std::vector<std::pair<double, double>> out;
    const int q = static_cast<int>(m.value.rows());
    for (int i = 0; i < q; ++i) {
        const Eigen::VectorXd v = es.eigenvectors().col(i);
        double var = 0.0;
        for (int r = 0; r < q; ++r)
            for (int s = 0; s < q; ++s) {
                const double c = v[r] * v[s] * m.se(r, s);
                var += c * c;
            }
        out.emplace_back(es.eigenvalues()[i], std::sqrt(var));
    }
    return out;
}

} // namespace weylwalk
