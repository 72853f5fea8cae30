#pragma once

#include "weylwalk/hypergroup.hpp"
#include "weylwalk/matrix.hpp"
#include "weylwalk/spectral.hpp"
#include "weylwalk/stats.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace weylwalk {

struct NamedTest {
    std::string name;
    double statistic = 0.0;
    double p_value = 1.0;
    bool pass = true;
};

/// Outcome of one experiment: config echo, point estimates, test statistics
/// and p-values, pass/fail flags, wall clock and seed.
struct ExperimentReport {
    std::string name;
    nlohmann::json config;
    nlohmann::json results;
    std::vector<NamedTest> tests;
    bool pass = true;
    bool degenerate = false;
    double wall_seconds = 0.0;
    uint64_t seed = 0;
    /// Raw per-replication samples for external plotting (CSV dump); kept out
    /// of the JSON artifact.
    std::vector<std::string> sample_columns;
    Eigen::MatrixXd samples;

    /// Deterministic artifact body: everything except the wall clock.
    nlohmann::json to_json() const;
    /// One line per test plus the verdict, for console output.
    std::string summary() const;
};

/// Law of large numbers: R walks of k steps; the mean deviation
/// ||S_k/k - m1(nu)|| must stay below 4 sqrt(trace Sigma^2(nu)/k) plus
/// 3 ||stderr(m1)||.
ExperimentReport lln_experiment(const DiscreteMeasure& nu, const CaseParams& params, int k, int R,
                                int n_mc, const RngStream& rng, int workers = 1);

/// Central limit theorem: normalized endpoint deviations tested per
/// coordinate against N(0, Sigma^2_ii) and jointly through the Mahalanobis
/// chi-square law, Bonferroni-corrected at level alpha.
ExperimentReport clt_experiment(const DiscreteMeasure& nu, const CaseParams& params, int k, int R,
                                int n_mc, double alpha, const RngStream& rng, int workers = 1);

enum class Accumulation { Exact, QR };

/// Two-sample comparison of hypergroup walk endpoints against projections of
/// matrix products k_1 a_t k_2 drawn at group level.
ExperimentReport group_oracle_A(int q, Field field, const DiscreteMeasure& nu, int k, int N,
                                const RngStream& rng, int workers = 1,
                                Accumulation acc = Accumulation::Exact);

/// One-step convolution check for integer p: group products k1 a_s k2 a_t
/// projected to the chamber against conv_step_BC draws.
ExperimentReport group_oracle_BC(int q, Field field, int p, const ChamberPoint& s,
                                 const ChamberPoint& t, int N, const RngStream& rng,
                                 int workers = 1);

/// ln sigma_sing of the product X_1 ... X_k of group elements, with scalar
/// renormalization against entry overflow. Throws once the accumulated
/// singular-value spread leaves the exactly representable window; the QR
/// accumulation below covers that regime.
Eigen::VectorXd product_log_spectrum_exact(const std::vector<MatrixF>& factors);

/// Benettin-style accumulation: repeated QR renormalization summing the log
/// R-diagonal. Converges to the same Lyapunov data for long products but is
/// not exact at finite k.
Eigen::VectorXd product_log_spectrum_qr(const std::vector<MatrixF>& factors);

/// Drift proximity and second-moment growth along the ray t = c * dir:
/// ||m1(t) - t|| and |m_{1,1}(t) - t_1^2|/(|t_1|+1) must show no trend over
/// the large-c half of the grid (slope confidence interval contains 0).
ExperimentReport ray_monitor(const SpectralParams& sp, const Eigen::VectorXd& dir,
                             const std::vector<double>& cvals, int n_mc, const RngStream& rng,
                             int workers = 1);

/// Oscillation monitor: residual/||lambda||^2 bounded over the t-grid, and
/// halving ||lambda|| divides the residual by about 4.
ExperimentReport oscillation_monitor(const SpectralParams& sp, const Eigen::VectorXd& dir,
                                     const std::vector<double>& cvals,
                                     const Eigen::VectorXd& lambda_dir,
                                     const std::vector<double>& eps, int n_mc,
                                     const RngStream& rng, int workers = 1);

/// Numeric checks of the determinant and minor lemmas behind the integral
/// representations (block determinants of unitaries, minor coefficients,
/// the triangular ball map, minor log-independence).
ExperimentReport lemma_suite(int q, Field field, int n_draws, const RngStream& rng);

} // namespace weylwalk
