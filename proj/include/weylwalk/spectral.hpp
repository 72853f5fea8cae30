#pragma once

#include "weylwalk/chamber.hpp"
#include "weylwalk/hypergroup.hpp"
#include "weylwalk/params.hpp"
#include "weylwalk/rng.hpp"

#include <complex>

namespace weylwalk {

/// Multi-index of a moment function; the built-in estimators cover |l| <= 2.
struct MomentIndex {
    Eigen::VectorXi l;

    MomentIndex() = default;
    explicit MomentIndex(Eigen::VectorXi l_) : l(std::move(l_)) {
        for (int i = 0; i < l.size(); ++i)
            if (l[i] < 0) throw std::invalid_argument("moment index entries must be >= 0");
    }
    static MomentIndex unit(int q, int r) {
        Eigen::VectorXi l = Eigen::VectorXi::Zero(q);
        l[r] = 1;
        return MomentIndex(l);
    }
    static MomentIndex pair(int q, int r, int s) {
        Eigen::VectorXi l = Eigen::VectorXi::Zero(q);
        l[r] += 1;
        l[s] += 1;
        return MomentIndex(l);
    }
    int order() const { return l.sum(); }
};

struct ScalarEstimate {
    double value = 0.0;
    double se = 0.0;
    size_t n = 0;
};
struct ComplexEstimate {
    std::complex<double> value;
    double se = 0.0;
    size_t n = 0;
};
struct VectorEstimate {
    Eigen::VectorXd value, se;
    size_t n = 0;
};
struct MatrixEstimate {
    Eigen::MatrixXd value, se;
    size_t n = 0;
};

/// Case tag, underlying (q, d, p) and the half sum of positive roots.
struct SpectralParams {
    CaseParams cp;
    Eigen::VectorXd rho;

    static SpectralParams case_a(int q, Field field);
    static SpectralParams case_bc(const BcParams& params);
};

/// rho_l = d/2 (q + 1 - 2l) for l = 1..q (type A, q >= 2).
Eigen::VectorXd rho_A(int q, Field field);
/// rho_i = d/2 (p + q + 2 - 2i) - 1 for i = 1..q (type BC).
Eigen::VectorXd rho_BC(const BcParams& params);

/// n independent draws of the log-minor vector (ln Delta_1, ..., ln Delta_q)
/// of the integrand kernel at t: u^* e^{2t} u over Haar u in the A case,
/// g(t, u, w) over Haar u and w ~ m_p in the BC case. Row i uses the
/// substream rng.derive(i), so results do not depend on the worker count.
Eigen::MatrixXd sample_log_minors(const ChamberPoint& t, const CaseParams& cp, int n,
                                  const RngStream& rng, int workers = 1);

/// Monte Carlo estimate of the spherical function phi_lambda(t) through its
/// integral representation.
ComplexEstimate spherical(const Eigen::VectorXcd& lambda, const ChamberPoint& t,
                          const SpectralParams& sp, int n_mc, const RngStream& rng,
                          int workers = 1);

/// Moment function m_l(t): mean of the product of powers of the per-sample
/// half-log-minor ratios. Never differentiates phi numerically.
ScalarEstimate moment(const MomentIndex& l, const ChamberPoint& t, const SpectralParams& sp,
                      int n_mc, const RngStream& rng, int workers = 1);

/// m_1 vector, m_2 matrix and the local covariance Sigma^2(t) from one shared
/// set of samples, so Sigma^2 is an empirical covariance and PSD up to rank
/// effects.
struct LocalMoments {
    VectorEstimate m1;
    MatrixEstimate m2;
    MatrixEstimate sigma2;
};
LocalMoments local_moments(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                           const RngStream& rng, int workers = 1);

VectorEstimate m1_vec(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                      const RngStream& rng, int workers = 1);
MatrixEstimate m2_mat(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                      const RngStream& rng, int workers = 1);
MatrixEstimate sigma2_local(const ChamberPoint& t, const SpectralParams& sp, int n_mc,
                            const RngStream& rng, int workers = 1);

/// Dispersion m_1(nu), the nu-integral of m_2, and the measure covariance
/// Sigma^2(nu) = int m_2 dnu - m_1(nu)^T m_1(nu); atom i uses rng.derive(i).
struct MeasureMoments {
    VectorEstimate m1;
    MatrixEstimate m2_integral;
    MatrixEstimate sigma2;
};
MeasureMoments measure_moments(const DiscreteMeasure& nu, const SpectralParams& sp, int n_mc,
                               const RngStream& rng, int workers = 1);

VectorEstimate dispersion(const DiscreteMeasure& nu, const SpectralParams& sp, int n_mc,
                          const RngStream& rng, int workers = 1);
MatrixEstimate covariance(const DiscreteMeasure& nu, const SpectralParams& sp, int n_mc,
                          const RngStream& rng, int workers = 1);

/// Spherical Fourier transform of nu at the real spectral displacement
/// lambda: the nu-average of phi_{-i rho - lambda}.
ComplexEstimate fourier_transform(const DiscreteMeasure& nu, const Eigen::VectorXd& lambda,
                                  const SpectralParams& sp, int n_mc, const RngStream& rng,
                                  int workers = 1);

/// |phi_{-i rho - lambda}(t) - e^{-i <lambda, m_1(t)>}| from one shared set
/// of samples; the leading Monte Carlo noise of the two terms cancels, which
/// makes the O(||lambda||^2) oscillation visible at small lambda.
struct OscillationResidual {
    double residual = 0.0;
    double phi_se = 0.0;
    size_t n = 0;
};
OscillationResidual oscillation_residual(const ChamberPoint& t, const Eigen::VectorXd& lambda,
                                         const SpectralParams& sp, int n_mc, const RngStream& rng,
                                         int workers = 1);

/// Eigenvalues of a matrix estimate together with first-order propagated
/// standard errors, ascending.
std::vector<std::pair<double, double>> eigenvalues_with_stderr(const MatrixEstimate& m);

} // namespace weylwalk
