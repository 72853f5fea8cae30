#include "weylwalk/limits.hpp"

#include "weylwalk/algebra.hpp"
#include "weylwalk/parallel.hpp"
#include "weylwalk/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <sstream>

namespace weylwalk {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

nlohmann::json vec_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

nlohmann::json mat_json(const Eigen::MatrixXd& m) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

void add_check(ExperimentReport& rep, const std::string& name, double stat, bool pass) {
    NamedTest t;
    t.name = name;
    t.statistic = stat;
    t.p_value = -1.0;  // not a p-value test
    t.pass = pass;
    rep.tests.push_back(t);
    rep.pass = rep.pass && pass;
}

void add_p_test(ExperimentReport& rep, const std::string& name, const TestResult& r, double alpha) {
    NamedTest t;
    t.name = name;
    t.statistic = r.statistic;
    t.p_value = r.p_value;
    t.pass = r.p_value > alpha;
    rep.tests.push_back(t);
    rep.pass = rep.pass && t.pass;
}

nlohmann::json case_config(const CaseParams& p) {
    nlohmann::json j;
    j["case"] = p.cs == Chamber::A ? "a" : "bc";
    j["q"] = p.q;
    j["d"] = p.field.d;
    if (p.cs == Chamber::B) j["p"] = p.p;
    return j;
}

nlohmann::json measure_config(const DiscreteMeasure& nu) {
    nlohmann::json atoms = nlohmann::json::array();
    for (size_t i = 0; i < nu.atoms.size(); ++i) {
        nlohmann::json a;
        a["t"] = vec_json(nu.atoms[i].v);
        a["weight"] = nu.weights[i];
        atoms.push_back(a);
    }
    return atoms;
}

// Signed determinant of the leading r x r block of a Hermitian matrix,
// through the eigenvalues of the embedded block (Dieudonne sqrt over H).
double hermitian_leading_minor(const MatrixF& x, int r) {
    const MatrixF b = x.block(0, 0, r, r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.embed());
    double det = 1.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) det *= es.eigenvalues()[i];
    if (x.field.embed_factor() == 2) return det >= 0.0 ? std::sqrt(det) : -std::sqrt(-det);
    return det;
}

} // namespace

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["config"] = config;
    j["results"] = results;
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : tests) {
        nlohmann::json e;
        e["name"] = t.name;
        e["statistic"] = t.statistic;
        if (t.p_value >= 0.0)
            e["p_value"] = t.p_value;
        else
            e["p_value"] = nullptr;
        e["pass"] = t.pass;
        ts.push_back(e);
    }
    j["tests"] = ts;
    j["pass"] = pass;
    j["degenerate"] = degenerate;
    j["seed"] = seed;
    return j;
}

std::string ExperimentReport::summary() const {
    std::ostringstream os;
    for (const auto& t : tests) {
        os << (t.pass ? "[PASS] " : "[FAIL] ") << name << "/" << t.name << ": stat=" << t.statistic;
        if (t.p_value >= 0.0) os << ", p=" << t.p_value;
        os << "\n";
    }
    os << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (degenerate) os << " (degenerate covariance branch)";
    os << "\n";
    return os.str();
}

ExperimentReport lln_experiment(const DiscreteMeasure& nu, const CaseParams& params, int k, int R,
                                int n_mc, const RngStream& rng, int workers) {
    if (k < 100) throw std::invalid_argument("lln_experiment: k must be >= 100");
    if (R < 50) throw std::invalid_argument("lln_experiment: R must be >= 50");
    Stopwatch clock;
    ExperimentReport rep;
    rep.name = "lln";
    rep.seed = rng.master_seed();
    rep.config = case_config(params);
    rep.config["nu"] = measure_config(nu);
    rep.config["k"] = k;
    rep.config["R"] = R;
    rep.config["n_mc"] = n_mc;

    const SpectralParams sp = params.cs == Chamber::A ? SpectralParams::case_a(params.q, params.field)
                                                      : SpectralParams::case_bc(params.bc());
    const MeasureMoments mm = measure_moments(nu, sp, n_mc, rng.derive(1), workers);

    std::vector<double> dev(R), rate_stat(R);
    rep.samples.resize(R, params.q);
    for (int c = 0; c < params.q; ++c)
        rep.sample_columns.push_back("endpoint_" + std::to_string(c + 1));
    const RngStream walk_rng = rng.derive(2);
    parallel_for(static_cast<size_t>(R), workers, [&](size_t r) {
        RngStream sub = walk_rng.derive(r);
        const Trajectory tr = walk(nu, k, params, sub);
        rep.samples.row(static_cast<int>(r)) = tr.points.back().v.transpose();
        dev[r] = (tr.points.back().v / double(k) - mm.m1.value).norm();
        double worst = 0.0;
        for (int j = 1; j <= k; ++j) {
            const double d = (tr.points[j].v - double(j) * mm.m1.value).norm();
            worst = std::max(worst, d * std::pow(double(j), -0.6));
        }
        rate_stat[r] = worst;
    });
    double mean_dev = 0.0, max_dev = 0.0, mean_rate = 0.0, max_rate = 0.0;
    for (int r = 0; r < R; ++r) {
        mean_dev += dev[r];
        max_dev = std::max(max_dev, dev[r]);
        mean_rate += rate_stat[r];
        max_rate = std::max(max_rate, rate_stat[r]);
    }
    mean_dev /= R;
    mean_rate /= R;

    const double tol = 4.0 * std::sqrt(std::max(mm.sigma2.value.trace(), 0.0) / double(k)) +
                       3.0 * mm.m1.se.norm();
    rep.results["m1_nu"] = vec_json(mm.m1.value);
    rep.results["m1_nu_se"] = vec_json(mm.m1.se);
    rep.results["sigma2_nu"] = mat_json(mm.sigma2.value);
    rep.results["mean_deviation"] = mean_dev;
    rep.results["max_deviation"] = max_dev;
    rep.results["tolerance"] = tol;
    // Monitored a.s.-rate statistic (not a gate): max_k ||S_k - k m1|| k^{-0.6}.
    rep.results["rate_statistic_mean"] = mean_rate;
    rep.results["rate_statistic_max"] = max_rate;
    add_check(rep, "mean_deviation_within_tolerance", mean_dev, mean_dev <= tol);
    rep.wall_seconds = clock.seconds();
    return rep;
}

ExperimentReport clt_experiment(const DiscreteMeasure& nu, const CaseParams& params, int k, int R,
                                int n_mc, double alpha, const RngStream& rng, int workers) {
    if (k < 200) throw std::invalid_argument("clt_experiment: k must be >= 200");
    if (R < 1000) throw std::invalid_argument("clt_experiment: R must be >= 1000");
    Stopwatch clock;
    ExperimentReport rep;
    rep.name = "clt";
    rep.seed = rng.master_seed();
    rep.config = case_config(params);
    rep.config["nu"] = measure_config(nu);
    rep.config["k"] = k;
    rep.config["R"] = R;
    rep.config["n_mc"] = n_mc;
    rep.config["alpha"] = alpha;

    const SpectralParams sp = params.cs == Chamber::A ? SpectralParams::case_a(params.q, params.field)
                                                      : SpectralParams::case_bc(params.bc());
    const MeasureMoments mm = measure_moments(nu, sp, n_mc, rng.derive(1), workers);
    const int q = params.q;
    rep.results["m1_nu"] = vec_json(mm.m1.value);
    rep.results["sigma2_nu"] = mat_json(mm.sigma2.value);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mm.sigma2.value);
    rep.results["sigma2_eigenvalues"] = vec_json(es.eigenvalues());
    const double floor = 1e-10 * std::max(mm.sigma2.value.trace(), 0.0);
    if (es.eigenvalues().minCoeff() <= floor) {
        // Expected for nu = delta_0 in the BC case and for A-case measures
        // supported on the diagonal ray.
        rep.degenerate = true;
        rep.results["degenerate_reason"] = "sigma2(nu) not invertible within eigenvalue floor";
        rep.wall_seconds = clock.seconds();
        return rep;
    }

    // Two normalized deviation statistics per replication. The endpoint
    // statistic (S_k - k m1(nu))/sqrt(k) is the theorem's object but carries
    // the bounded gap E[t - m1(t)] as an O(1/sqrt k) centering offset, which
    // per-mille-level KS tests resolve at these scales. The distributional
    // gates therefore run on the transfer statistic
    // (m1(S_k) - k m1(nu))/sqrt(k), whose mean is exactly zero because first
    // moment functions add under the convolution; the endpoint offset is
    // checked separately against the gap bound.
    const int n_inner = 4000;
    Eigen::MatrixXd z_end(R, q), z_mom(R, q);
    const RngStream walk_rng = rng.derive(2);
    parallel_for(static_cast<size_t>(R), workers, [&](size_t r) {
        RngStream sub = walk_rng.derive(r);
        const Trajectory tr = walk(nu, k, params, sub);
        const double rk = std::sqrt(double(k));
        z_end.row(static_cast<int>(r)) =
            ((tr.points.back().v - double(k) * mm.m1.value) / rk).transpose();
        const VectorEstimate em = m1_vec(tr.points.back(), sp, n_inner, sub.derive(1));
        z_mom.row(static_cast<int>(r)) =
            ((em.value - double(k) * mm.m1.value) / rk).transpose();
    });

    const double bonferroni = alpha / double(q + 1);
    for (int c = 0; c < q; ++c) {
        std::vector<double> col(z_mom.col(c).data(), z_mom.col(c).data() + R);
        const double sd = std::sqrt(mm.sigma2.value(c, c));
        const TestResult tr =
            ks_one_sample(std::move(col), [sd](double x) { return normal_cdf(x, 0.0, sd); });
        add_p_test(rep, "ks_coordinate_" + std::to_string(c + 1), tr, bonferroni);
    }
    add_p_test(rep, "mahalanobis_chi2", mahalanobis_chi2(z_mom, mm.sigma2.value), bonferroni);

    // Endpoint centering: ||mean Z_end|| within the drift-gap transfer bound.
    Eigen::VectorXd scale_point = double(k) * mm.m1.value;
    std::sort(scale_point.data(), scale_point.data() + q, std::greater<double>());
    if (params.cs == Chamber::B) scale_point = scale_point.cwiseMax(0.0);
    const VectorEstimate gap_m1 =
        m1_vec(ChamberPoint(params.cs, scale_point), sp, 20000, rng.derive(3), workers);
    const double gap_est = (scale_point - gap_m1.value).norm();
    const Eigen::VectorXd z_mean = z_end.colwise().mean();
    const double allow = 1.5 * gap_est / std::sqrt(double(k)) +
                         4.0 * std::sqrt(std::max(mm.sigma2.value.trace(), 0.0) / double(R));
    rep.results["endpoint_mean_offset"] = vec_json(z_mean);
    rep.results["drift_gap_estimate"] = gap_est;
    add_check(rep, "endpoint_centering_within_gap_bound", z_mean.norm(), z_mean.norm() <= allow);
    rep.wall_seconds = clock.seconds();
    return rep;
}

Eigen::VectorXd product_log_spectrum_exact(const std::vector<MatrixF>& factors) {
    if (factors.empty()) throw std::invalid_argument("product_log_spectrum_exact: empty product");
    // A stored double-precision product cannot represent singular values
    // below ~1e-14 of the largest; bound the possible spread by the product
    // of the factors' condition numbers before multiplying anything.
    double spread_bound = 0.0;
    for (const MatrixF& x : factors) {
        const Eigen::VectorXd s = singular_spectrum(x);
        if (!(s[s.size() - 1] > 0.0))
            throw std::domain_error("product_log_spectrum_exact: singular factor");
        spread_bound += std::log(s[0]) - std::log(s[s.size() - 1]);
    }
    if (spread_bound > 30.0)
        throw std::domain_error(
            "product_log_spectrum_exact: accumulated singular-value spread exceeds the window "
            "representable in one matrix; use the QR accumulation (log-R) mode");
    MatrixF m = factors[0];
    double log_scale = 0.0;
    auto renorm = [&] {
        const double s = m.max_abs();
        if (s <= 0.0) throw std::domain_error("product_log_spectrum_exact: zero matrix");
        m = m * (1.0 / s);
        log_scale += std::log(s);
    };
    renorm();
    for (size_t i = 1; i < factors.size(); ++i) {
        m = m * factors[i];
        renorm();
    }
    const Eigen::VectorXd sig = singular_spectrum(m);
    Eigen::VectorXd out(sig.size());
    for (int i = 0; i < sig.size(); ++i) out[i] = std::log(sig[i]) + log_scale;
    return out;
}

namespace {

// Modified Gram-Schmidt QR over F with positive diagonal; returns Q in place
// and the log of the R diagonal.
Eigen::VectorXd qr_positive_logdiag(MatrixF& m) {
    const int q = m.cols;
    Eigen::VectorXd logdiag(q);
    for (int j = 0; j < q; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) {
                FScalar c;
                for (int i = 0; i < m.rows; ++i) c += m.at(i, k).conj() * m.at(i, j);
                for (int i = 0; i < m.rows; ++i) m.at(i, j) = m.at(i, j) - m.at(i, k) * c;
            }
        double nrm = 0.0;
        for (int i = 0; i < m.rows; ++i) nrm += m.at(i, j).norm2();
        nrm = std::sqrt(nrm);
        logdiag[j] = std::log(nrm);
        for (int i = 0; i < m.rows; ++i) m.at(i, j) = m.at(i, j) / nrm;
    }
    return logdiag;
}

} // namespace

Eigen::VectorXd product_log_spectrum_qr(const std::vector<MatrixF>& factors) {
    if (factors.empty()) throw std::invalid_argument("product_log_spectrum_qr: empty product");
    const int q = factors[0].rows;
    MatrixF frame = MatrixF::identity(factors[0].field, q);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(q);
    // sigma(X_1...X_k) = sigma(X_k^* ... X_1^*): new factors enter on the left.
    for (const MatrixF& x : factors) {
        frame = x.adjoint() * frame;
        acc += qr_positive_logdiag(frame);
    }
    std::sort(acc.data(), acc.data() + q, std::greater<double>());
    return acc;
}

ExperimentReport group_oracle_A(int q, Field field, const DiscreteMeasure& nu, int k, int N,
                                const RngStream& rng, int workers, Accumulation acc) {
    if (N < 10000) throw std::invalid_argument("group_oracle_A: N must be >= 10^4 per arm");
    if (k < 1) throw std::invalid_argument("group_oracle_A: k must be >= 1");
    Stopwatch clock;
    ExperimentReport rep;
    rep.name = "group_oracle_a";
    rep.seed = rng.master_seed();
    rep.config = case_config(CaseParams::case_a(q, field));
    rep.config["nu"] = measure_config(nu);
    rep.config["k"] = k;
    rep.config["N"] = N;
    rep.config["accumulation"] = acc == Accumulation::Exact ? "exact" : "qr";

    const CaseParams params = CaseParams::case_a(q, field);
    Eigen::MatrixXd arm_walk(N, q), arm_group(N, q);
    const RngStream rng_walk = rng.derive(1), rng_group = rng.derive(2);
    // Atomic components of the two arms (k = 1, or boundary coincidences)
    // differ only in sub-1e-12 rounding; a common symmetric dither makes the
    // KS comparison reflect the laws rather than that microstructure.
    const double dither = 1e-9;
    parallel_for(static_cast<size_t>(N), workers, [&](size_t i) {
        RngStream sub = rng_walk.derive(i);
        Eigen::VectorXd v = walk(nu, k, params, sub).points.back().v;
        for (int c = 0; c < q; ++c) v[c] += sub.uniform(-dither, dither);
        arm_walk.row(static_cast<int>(i)) = v.transpose();
    });
    parallel_for(static_cast<size_t>(N), workers, [&](size_t i) {
        RngStream sub = rng_group.derive(i);
        std::vector<MatrixF> factors;
        factors.reserve(3 * k);
        for (int j = 0; j < k; ++j) {
            const ChamberPoint& t = measure_sample(nu, sub);
            factors.push_back(haar_unitary(q, field, sub));
            factors.push_back(a_matrix_A(t, field));
            factors.push_back(haar_unitary(q, field, sub));
        }
        Eigen::VectorXd ls = acc == Accumulation::Exact ? product_log_spectrum_exact(factors)
                                                        : product_log_spectrum_qr(factors);
        for (int c = 0; c < q; ++c) ls[c] += sub.uniform(-dither, dither);
        arm_group.row(static_cast<int>(i)) = ls.transpose();
    });

    for (int c = 0; c < q; ++c) {
        std::vector<double> x(arm_walk.col(c).data(), arm_walk.col(c).data() + N);
        std::vector<double> y(arm_group.col(c).data(), arm_group.col(c).data() + N);
        add_p_test(rep, "ks_coordinate_" + std::to_string(c + 1), ks_two_sample(x, y), 0.001);
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

ExperimentReport group_oracle_BC(int q, Field field, int p, const ChamberPoint& s,
                                 const ChamberPoint& t, int N, const RngStream& rng, int workers) {
    if (p <= q) throw std::invalid_argument("group_oracle_BC: p must exceed q");
    if (N < 20000) throw std::invalid_argument("group_oracle_BC: N must be >= 2*10^4 per arm");
    Stopwatch clock;
    const BcParams bp(q, field, double(p));
    ExperimentReport rep;
    rep.name = "group_oracle_bc";
    rep.seed = rng.master_seed();
    rep.config = case_config(CaseParams::case_bc(bp));
    rep.config["s"] = vec_json(s.v);
    rep.config["t"] = vec_json(t.v);
    rep.config["N"] = N;

    const bool real_case = field.tag == FieldTag::Real;
    const MatrixF a_s = a_matrix_BC(s, p, field);
    const MatrixF a_t = a_matrix_BC(t, p, field);
    auto block_haar = [&](RngStream& sub) {
        MatrixF m(field, q + p, q + p);
        const MatrixF u = real_case ? haar_special_orthogonal(q, sub) : haar_unitary(q, field, sub);
        const MatrixF v = real_case ? haar_special_orthogonal(p, sub) : haar_unitary(p, field, sub);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) m.at(i, j) = u.at(i, j);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) m.at(q + i, q + j) = v.at(i, j);
        return m;
    };

    Eigen::MatrixXd arm_conv(N, q), arm_group(N, q);
    const RngStream rng_conv = rng.derive(1), rng_group = rng.derive(2);
    parallel_for(static_cast<size_t>(N), workers, [&](size_t i) {
        RngStream sub = rng_conv.derive(i);
        arm_conv.row(static_cast<int>(i)) = conv_step_BC(s, t, bp, sub).v.transpose();
    });
    parallel_for(static_cast<size_t>(N), workers, [&](size_t i) {
        RngStream sub = rng_group.derive(i);
        const MatrixF k1 = block_haar(sub), k2 = block_haar(sub);
        const MatrixF m = k1 * a_s * (k2 * a_t);
        arm_group.row(static_cast<int>(i)) = chamber_project_BC(m, q).v.transpose();
    });

    if (s.is_zero() || t.is_zero()) {
        // Identity case: both arms concentrate at the other point exactly;
        // a KS test makes no sense against a point mass.
        const Eigen::VectorXd expected = s.is_zero() ? t.v : s.v;
        double worst = 0.0;
        for (int i = 0; i < N; ++i)
            for (int c = 0; c < q; ++c) {
                worst = std::max(worst, std::abs(arm_conv(i, c) - expected[c]));
                worst = std::max(worst, std::abs(arm_group(i, c) - expected[c]));
            }
        add_check(rep, "identity_concentration", worst, worst <= 1e-6);
        rep.wall_seconds = clock.seconds();
        return rep;
    }

    for (int c = 0; c < q; ++c) {
        std::vector<double> x(arm_conv.col(c).data(), arm_conv.col(c).data() + N);
        std::vector<double> y(arm_group.col(c).data(), arm_group.col(c).data() + N);
        add_p_test(rep, "ks_coordinate_" + std::to_string(c + 1), ks_two_sample(x, y), 0.001);
    }
    rep.wall_seconds = clock.seconds();
    return rep;
}

ExperimentReport ray_monitor(const SpectralParams& sp, const Eigen::VectorXd& dir,
                             const std::vector<double>& cvals, int n_mc, const RngStream& rng,
                             int workers) {
    if (cvals.size() < 6) throw std::invalid_argument("ray_monitor: need >= 6 grid points");
    Stopwatch clock;
    ExperimentReport rep;
    rep.name = "ray_monitor";
    rep.seed = rng.master_seed();
    rep.config = case_config(sp.cp);
    rep.config["direction"] = vec_json(dir);
    rep.config["c_grid"] = cvals;
    rep.config["n_mc"] = n_mc;

    const int q = sp.cp.q;
    std::vector<double> drift(cvals.size()), drift_se(cvals.size()), m11_ratio(cvals.size());
    nlohmann::json gaps = nlohmann::json::array();
    bool chamber_ok = true;
    for (size_t i = 0; i < cvals.size(); ++i) {
        const ChamberPoint t(sp.cp.cs, cvals[i] * dir);
        const LocalMoments lm = local_moments(t, sp, n_mc, rng.derive(i), workers);
        drift[i] = (lm.m1.value - t.v).norm();
        drift_se[i] = lm.m1.se.norm();
        m11_ratio[i] = std::abs(lm.m2.value(0, 0) - t.v[0] * t.v[0]) / (std::abs(t.v[0]) + 1.0);
        // Exploratory only (the two-sided bound is proved, the one-sided one
        // is open): partial-sum gaps t_1+..+t_r - (m1_1+..+m1_r), reported
        // and never gated.
        nlohmann::json row = nlohmann::json::array();
        double gap = 0.0;
        for (int r = 0; r < q; ++r) {
            gap += t.v[r] - lm.m1.value[r];
            row.push_back(gap);
        }
        gaps.push_back(row);
        // Chamber membership of the m1 estimate, within 3 stderr per constraint.
        for (int r = 0; r + 1 < q; ++r)
            chamber_ok = chamber_ok && lm.m1.value[r] - lm.m1.value[r + 1] >
                                           -3.0 * (lm.m1.se[r] + lm.m1.se[r + 1]);
        if (sp.cp.cs == Chamber::B)
            chamber_ok = chamber_ok && lm.m1.value[q - 1] > -3.0 * lm.m1.se[q - 1];
    }
    // Trend over the large-c half of the grid. A bounded quantity approaches
    // its limit from below, so a finite window always shows a small positive
    // slope; "no growth trend" therefore means either slope within MC error
    // or extrapolated growth over the whole horizon below a quarter of the
    // level. Linear (unbounded) growth would show ~100% per horizon.
    const size_t half = cvals.size() / 2;
    std::vector<double> c_half(cvals.begin() + half, cvals.end());
    std::vector<double> drift_half(drift.begin() + half, drift.end());
    std::vector<double> m11_half(m11_ratio.begin() + half, m11_ratio.end());
    const SlopeFit fd = fit_slope(c_half, drift_half);
    const SlopeFit fm = fit_slope(c_half, m11_half);
    auto no_trend = [&](const SlopeFit& f, const std::vector<double>& level_vals) {
        double level = 0.0;
        for (double v : level_vals) level += std::abs(v);
        level /= double(level_vals.size());
        return std::abs(f.slope) <= 3.0 * f.slope_se ||
               std::abs(f.slope) * cvals.back() <= 0.25 * level;
    };

    rep.results["drift_norm"] = drift;
    rep.results["drift_norm_se"] = drift_se;
    rep.results["m11_growth_ratio"] = m11_ratio;
    rep.results["partial_sum_gaps"] = gaps;
    rep.results["drift_slope"] = fd.slope;
    rep.results["drift_slope_se"] = fd.slope_se;
    rep.results["m11_slope"] = fm.slope;
    rep.results["m11_slope_se"] = fm.slope_se;
    add_check(rep, "m1_chamber_membership", chamber_ok ? 0.0 : 1.0, chamber_ok);
    add_check(rep, "drift_no_growth_trend", fd.slope, no_trend(fd, drift_half));
    add_check(rep, "m11_no_growth_trend", fm.slope, no_trend(fm, m11_half));
    rep.wall_seconds = clock.seconds();
    return rep;
}

ExperimentReport oscillation_monitor(const SpectralParams& sp, const Eigen::VectorXd& dir,
                                     const std::vector<double>& cvals,
                                     const Eigen::VectorXd& lambda_dir,
                                     const std::vector<double>& eps, int n_mc,
                                     const RngStream& rng, int workers) {
    if (cvals.size() < 4 || eps.size() < 2)
        throw std::invalid_argument("oscillation_monitor: need >= 4 grid points and >= 2 epsilons");
    Stopwatch clock;
    ExperimentReport rep;
    rep.name = "oscillation_monitor";
    rep.seed = rng.master_seed();
    rep.config = case_config(sp.cp);
    rep.config["direction"] = vec_json(dir);
    rep.config["c_grid"] = cvals;
    rep.config["lambda_dir"] = vec_json(lambda_dir);
    rep.config["eps"] = eps;
    rep.config["n_mc"] = n_mc;

    const int q = sp.cp.q;
    // residual[c][e], all epsilons share one sample set per grid point.
    std::vector<std::vector<double>> resid(cvals.size(), std::vector<double>(eps.size()));
    std::vector<double> noise(cvals.size(), 0.0);
    for (size_t ci = 0; ci < cvals.size(); ++ci) {
        const ChamberPoint t(sp.cp.cs, cvals[ci] * dir);
        Eigen::MatrixXd lm = sample_log_minors(t, sp.cp, n_mc, rng.derive(ci), workers);
        for (int c = q - 1; c >= 1; --c) lm.col(c) -= lm.col(c - 1);
        lm *= 0.5;
        const Eigen::VectorXd m1 = lm.colwise().mean();
        for (size_t ei = 0; ei < eps.size(); ++ei) {
            const Eigen::VectorXd lambda = eps[ei] * lambda_dir;
            std::complex<double> phi(0.0, 0.0);
            for (int i = 0; i < n_mc; ++i)
                phi += std::exp(std::complex<double>(0.0, -lambda.dot(Eigen::VectorXd(lm.row(i)))));
            phi /= double(n_mc);
            resid[ci][ei] = std::abs(phi - std::exp(std::complex<double>(0.0, -lambda.dot(m1))));
        }
        // Rough per-point noise scale of phi at the largest epsilon.
        const Eigen::VectorXd lambda0 = eps[0] * lambda_dir;
        double ss = 0.0;
        std::complex<double> mean(0.0, 0.0);
        for (int i = 0; i < n_mc; ++i)
            mean += std::exp(std::complex<double>(0.0, -lambda0.dot(Eigen::VectorXd(lm.row(i)))));
        mean /= double(n_mc);
        for (int i = 0; i < n_mc; ++i)
            ss += std::norm(std::exp(std::complex<double>(0.0, -lambda0.dot(Eigen::VectorXd(lm.row(i))))) - mean);
        noise[ci] = std::sqrt(ss / (double(n_mc) * double(n_mc - 1)));
    }

    // Boundedness: ratio residual/||lambda||^2 over the grid should not grow
    // with t; compare against the small-t half plus the noise allowance.
    const double l2 = lambda_dir.squaredNorm();
    bool bounded = true;
    double worst_ratio = 0.0;
    for (size_t ei = 0; ei < eps.size(); ++ei) {
        const double denom = eps[ei] * eps[ei] * l2;
        double max_small = 0.0, max_all = 0.0, max_noise = 0.0;
        for (size_t ci = 0; ci < cvals.size(); ++ci) {
            const double ratio = resid[ci][ei] / denom;
            max_all = std::max(max_all, ratio);
            if (ci < cvals.size() / 2) max_small = std::max(max_small, ratio);
            max_noise = std::max(max_noise, noise[ci] / denom);
        }
        worst_ratio = std::max(worst_ratio, max_all);
        bounded = bounded && max_all <= 2.0 * max_small + 3.0 * max_noise;
    }
    add_check(rep, "ratio_bounded_over_grid", worst_ratio, bounded);

    // Quadratic smallness: halving ||lambda|| divides the residual by ~4.
    // Checked at the far end of the grid, where t-uniformity is the claim.
    bool quadratic = true;
    std::vector<double> halving;
    for (size_t ei = 0; ei + 1 < eps.size(); ++ei) {
        const double r = resid[cvals.size() - 1][ei] / resid[cvals.size() - 1][ei + 1];
        halving.push_back(r);
        quadratic = quadratic && r >= 2.5 && r <= 6.0;
    }
    rep.results["halving_ratios"] = halving;
    nlohmann::json rj = nlohmann::json::array();
    for (auto& row : resid) rj.push_back(row);
    rep.results["residuals"] = rj;
    add_check(rep, "residual_quadratic_in_lambda", halving.empty() ? 0.0 : halving[0], quadratic);
    rep.wall_seconds = clock.seconds();
    return rep;
}

ExperimentReport lemma_suite(int q, Field field, int n_draws, const RngStream& rng) {
    if (q < 2) throw std::invalid_argument("lemma_suite: q must be >= 2");
    Stopwatch clock;
    ExperimentReport rep;
    rep.name = "lemma_suite";
    rep.seed = rng.master_seed();
    rep.config["q"] = q;
    rep.config["d"] = field.d;
    rep.config["n_draws"] = n_draws;

    // Block determinants of unitaries: |det u_1| = |det u_2|.
    {
        RngStream sub = rng.derive(1);
        double worst = 0.0;
        for (int i = 0; i < n_draws; ++i) {
            const MatrixF u = haar_unitary(q, field, sub);
            for (int r = 1; r < q; ++r) {
                const double d1 = det_modulus(u.block(0, 0, r, r));
                const double d2 = det_modulus(u.block(r, r, q - r, q - r));
                worst = std::max(worst, std::abs(d1 - d2));
            }
        }
        add_check(rep, "block_det_equality", worst, worst < 1e-9);
    }

    // Minor coefficients c_{i_1..i_r} of Delta_r(u^* diag(a) u): nonnegative,
    // summing to 1, and reproducing the minor polynomial.
    {
        RngStream sub = rng.derive(2);
        double min_coef = 0.0, worst_sum = 0.0, worst_poly = 0.0, worst_bound = 0.0;
        const int n_u = 25;
        for (int iu = 0; iu < n_u; ++iu) {
            const MatrixF u = haar_unitary(q, field, sub);
            for (int r = 1; r <= q; ++r) {
                // Enumerate r-subsets and their indicator coefficients.
                std::vector<std::vector<int>> subs;
                std::vector<int> comb(r);
                for (int i = 0; i < r; ++i) comb[i] = i;
                for (;;) {
                    subs.push_back(comb);
                    int i = r - 1;
                    while (i >= 0 && comb[i] == q - r + i) --i;
                    if (i < 0) break;
                    ++comb[i];
                    for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
                }
                std::vector<double> coef(subs.size());
                double sum = 0.0;
                for (size_t si = 0; si < subs.size(); ++si) {
                    Eigen::VectorXd ind = Eigen::VectorXd::Zero(q);
                    for (int idx : subs[si]) ind[idx] = 1.0;
                    const MatrixF x = u.adjoint() * u.scale_rows(ind);
                    coef[si] = hermitian_leading_minor(x, r);
                    min_coef = std::min(min_coef, coef[si]);
                    sum += coef[si];
                }
                worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
                for (int ia = 0; ia < 20; ++ia) {
                    Eigen::VectorXd a(q);
                    for (int i = 0; i < q; ++i) a[i] = sub.uniform(0.5, 2.5);
                    const MatrixF x = u.adjoint() * u.scale_rows(a);
                    const double h = hermitian_leading_minor(x, r);
                    double expansion = 0.0;
                    for (size_t si = 0; si < subs.size(); ++si) {
                        double prod = coef[si];
                        for (int idx : subs[si]) prod *= a[idx];
                        expansion += prod;
                    }
                    worst_poly = std::max(worst_poly, std::abs(h - expansion) / std::abs(h));
                    // C_r / h_r <= binom^{-1} sum 1/c when every coefficient is positive.
                    double min_c = coef[0];
                    for (double cv : coef) min_c = std::min(min_c, cv);
                    if (min_c > 1e-12) {
                        double inv_sum = 0.0;
                        for (double cv : coef) inv_sum += 1.0 / cv;
                        const double lhs = elementary_symmetric_mean(a, r) / h;
                        const double rhs = inv_sum / binom(q, r);
                        worst_bound = std::max(worst_bound, lhs - rhs);
                    }
                }
            }
        }
        add_check(rep, "minor_coefficients_nonnegative", min_coef, min_coef >= -1e-12);
        add_check(rep, "minor_coefficients_sum_to_one", worst_sum, worst_sum <= 1e-9);
        add_check(rep, "minor_polynomial_identity", worst_poly, worst_poly <= 1e-8);
        add_check(rep, "symmetric_mean_ratio_bound", worst_bound, worst_bound <= 1e-8);
    }

    // Triangular ball map: |det P(y)| equals |det| of the stacked rows.
    {
        RngStream sub = rng.derive(3);
        double worst = 0.0;
        const int n_p = std::min(n_draws, 200);
        for (int i = 0; i < n_p; ++i) {
            std::vector<MatrixF> ys;
            MatrixF stacked(field, q, q);
            for (int j = 0; j < q; ++j) {
                ys.push_back(ball_point(q, field, 0.0, sub));
                for (int c = 0; c < q; ++c) stacked.at(j, c) = ys.back().at(0, c);
            }
            const double dp = det_modulus(p_map(ys));
            const double ds = det_modulus(stacked);
            worst = std::max(worst, std::abs(dp - ds));
        }
        add_check(rep, "ball_map_determinant_identity", worst, worst <= 1e-9);
    }

    // Log-minor independence: the matrix built from coordinate swaps of a
    // generic diagonal is nonsingular.
    {
        RngStream sub = rng.derive(4);
        double worst_ok = 1e300;
        for (int rep_i = 0; rep_i < 20; ++rep_i) {
            Eigen::VectorXd a(q);
            for (int i = 0; i < q; ++i) a[i] = sub.uniform(0.5, 3.0);
            Eigen::MatrixXd mat(q, q);
            for (int l = 0; l < q; ++l) {
                Eigen::VectorXd perm = a;
                if (l > 0) std::swap(perm[0], perm[l]);
                double acc = 0.0;
                for (int r = 0; r < q - 1; ++r) {
                    acc += std::log(perm[r]);
                    mat(r, l) = acc;
                }
                mat(q - 1, l) = 1.0;
            }
            worst_ok = std::min(worst_ok, std::abs(mat.determinant()));
        }
        add_check(rep, "log_minor_independence", worst_ok, worst_ok > 1e-10);
    }

    rep.wall_seconds = clock.seconds();
    return rep;
}

} // namespace weylwalk
