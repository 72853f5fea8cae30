// Acceptance suite: one criterion per command-line argument (1..9), each
// printing PASS/FAIL lines. Run through ctest as acceptance_1 .. acceptance_9.

#include "weylwalk/algebra.hpp"
#include "weylwalk/cli.hpp"
#include "weylwalk/limits.hpp"
#include "weylwalk/sampling.hpp"
#include "weylwalk/spectral.hpp"
#include "weylwalk/stats.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace weylwalk;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

void check_report(const ExperimentReport& rep, const std::string& what) {
    std::cout << rep.summary();
    check(rep.pass, what);
}

ChamberPoint pt(Chamber c, std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<int>(v.size()));
    int i = 0;
    for (double d : v) x[i++] = d;
    return ChamberPoint(c, x);
}

DiscreteMeasure two_atom(Chamber c) {
    return DiscreteMeasure({pt(c, {1.0, 0.3}), pt(c, {2.0, 1.0})}, {0.5, 0.5});
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: exact identities at machine precision.
void criterion_1() {
    RngStream rng(1001, 0);
    // phi_{-i rho} == 1 per sample with stderr 0 across 12 (q, d, p) combos.
    struct Combo {
        Chamber cs;
        int q;
        int d;
        double p;
    };
    const std::vector<Combo> combos = {
        {Chamber::A, 2, 1, 0}, {Chamber::A, 2, 2, 0}, {Chamber::A, 2, 4, 0},
        {Chamber::A, 3, 1, 0}, {Chamber::A, 3, 2, 0}, {Chamber::A, 3, 4, 0},
        {Chamber::B, 1, 1, 2.0}, {Chamber::B, 1, 2, 1.8}, {Chamber::B, 2, 1, 3.6},
        {Chamber::B, 2, 4, 4.0}, {Chamber::B, 3, 2, 5.5}, {Chamber::B, 3, 4, 6.0},
    };
    bool all_exact = true;
    for (const auto& c : combos) {
        const SpectralParams sp = c.cs == Chamber::A
                                      ? SpectralParams::case_a(c.q, Field::from_d(c.d))
                                      : SpectralParams::case_bc(BcParams(c.q, Field::from_d(c.d), c.p));
        Eigen::VectorXd tv(c.q);
        for (int i = 0; i < c.q; ++i) tv[i] = 1.6 - 0.5 * i;
        if (c.cs == Chamber::B) tv = tv.cwiseMax(0.0);
        Eigen::VectorXcd lambda(c.q);
        for (int r = 0; r < c.q; ++r) lambda[r] = std::complex<double>(0.0, -sp.rho[r]);
        const ComplexEstimate est =
            spherical(lambda, ChamberPoint(c.cs, tv), sp, 400, rng.derive(c.q * 10 + c.d));
        all_exact = all_exact && est.value == std::complex<double>(1.0, 0.0) && est.se == 0.0;
    }
    check(all_exact, "phi at -i rho is exactly 1 with stderr 0 (12 combos)");

    // A-case telescoping: sum of first-order moments equals the coordinate sum.
    bool tele = true;
    for (int q : {2, 3}) {
        const SpectralParams sp = SpectralParams::case_a(q, Field::complex_field());
        Eigen::VectorXd tv(q);
        for (int i = 0; i < q; ++i) tv[i] = 1.8 - 0.9 * i;
        const LocalMoments lm = local_moments(ChamberPoint(Chamber::A, tv), sp, 2000, rng.derive(q));
        tele = tele && std::abs(lm.m1.value.sum() - tv.sum()) <= 1e-9;
    }
    check(tele, "A-case sum of first-order moments equals sum(t) to 1e-9");

    // BC moments vanish exactly at the identity.
    const SpectralParams spb = SpectralParams::case_bc(BcParams(2, Field::real(), 3.5));
    const LocalMoments at0 = local_moments(ChamberPoint::zero(Chamber::B, 2), spb, 256, rng);
    check(at0.m1.value.cwiseAbs().maxCoeff() == 0.0 && at0.sigma2.value.cwiseAbs().maxCoeff() == 0.0,
          "BC m1(0) = 0 and Sigma^2(0) = 0 exactly");

    // Convolution identity element.
    bool conv_id = true;
    RngStream cr(1002, 0);
    const ChamberPoint ta = pt(Chamber::A, {1.4, -0.2});
    const ChamberPoint tb = pt(Chamber::B, {1.4, 0.2});
    for (int i = 0; i < 100; ++i) {
        conv_id = conv_id &&
                  conv_step_A(ChamberPoint::zero(Chamber::A, 2), ta, Field::real(), cr).v == ta.v;
        conv_id = conv_id && conv_step_BC(ChamberPoint::zero(Chamber::B, 2), tb,
                                          BcParams(2, Field::real(), 3.5), cr)
                                     .v == tb.v;
    }
    check(conv_id, "delta_0 * delta_t = delta_t exactly (both cases)");
}

// ---------------------------------------------------------------------------
// Criterion 2: lemma suite.
void criterion_2() {
    for (Field f : {Field::real(), Field::complex_field(), Field::quaternion()}) {
        const ExperimentReport rep = lemma_suite(2, f, 1000, RngStream(2000 + f.d, 0));
        check_report(rep, std::string("lemma suite q=2 over ") + f.name());
    }
    const ExperimentReport rep3 = lemma_suite(3, Field::real(), 1000, RngStream(2010, 0));
    check_report(rep3, "lemma suite q=3 over R");
}

// ---------------------------------------------------------------------------
// Criterion 3: sampler correctness.
void criterion_3() {
    // sample_mp vs rejection oracle at (q=2, d=1, p=6), N = 2*10^4.
    {
        RngStream rng(3001, 0);
        const BcParams bp(2, Field::real(), 6.0);
        const int n = 20000;
        std::vector<double> a(n), b(n);
        RngStream r1 = rng.derive(1), r2 = rng.derive(2);
        for (int i = 0; i < n; ++i) a[i] = largest_singular_value(sample_mp(bp, r1));
        for (int i = 0; i < n; ++i) b[i] = largest_singular_value(sample_mp_rejection(bp, r2));
        const TestResult ks = ks_two_sample(a, b);
        check(ks.p_value > 0.001, "sample_mp vs rejection oracle (q=2,d=1,p=6)",
              "KS p=" + fmt(ks.p_value));
    }
    // Ball radial law vs Beta(dq/2, a+1).
    {
        bool ok = true;
        std::string detail;
        for (Field f : {Field::real(), Field::complex_field(), Field::quaternion()}) {
            RngStream rng(3002, f.d);
            const int q = 2, n = 20000;
            const double a = 0.9;
            std::vector<double> r2(n);
            for (int i = 0; i < n; ++i) {
                const MatrixF y = ball_point(q, f, a, rng);
                double nrm2 = 0.0;
                for (int j = 0; j < q; ++j) nrm2 += y.at(0, j).norm2();
                r2[i] = nrm2;
            }
            const TestResult ks =
                ks_one_sample(r2, [&](double x) { return beta_cdf(x, 0.5 * f.d * q, a + 1.0); });
            ok = ok && ks.p_value > 0.001;
            detail += std::string(f.name()) + " p=" + fmt(ks.p_value) + " ";
        }
        check(ok, "ball radial law matches Beta(dq/2, a+1)", detail);
    }
    // Haar invariance suite.
    {
        bool ok = true;
        std::string detail;
        for (Field f : {Field::real(), Field::complex_field(), Field::quaternion()}) {
            RngStream rng(3003, f.d);
            const int q = 3, n = 20000;
            Eigen::VectorXd x(q);
            x << 3.0, 1.0, 0.5;
            RngStream vr = rng.derive(17);
            const MatrixF v = haar_unitary(q, f, vr);
            std::vector<double> plain(n), shifted(n);
            for (int i = 0; i < n; ++i) {
                const MatrixF u = haar_unitary(q, f, rng);
                plain[i] = log_principal_minors(u.adjoint() * u.scale_rows(x))[0];
                const MatrixF vu = v * haar_unitary(q, f, rng);
                shifted[i] = log_principal_minors(vu.adjoint() * vu.scale_rows(x))[0];
            }
            const TestResult ks = ks_two_sample(plain, shifted);
            ok = ok && ks.p_value > 0.001;
            detail += std::string(f.name()) + " p=" + fmt(ks.p_value) + " ";
        }
        check(ok, "Haar invariance of minor laws", detail);
    }
}

// ---------------------------------------------------------------------------
// Criterion 4: group oracles.
void criterion_4() {
    check_report(group_oracle_BC(2, Field::real(), 4, pt(Chamber::B, {1.0, 0.5}),
                                 pt(Chamber::B, {1.0, 0.5}), 20000, RngStream(4001, 0)),
                 "one-step convolution vs group arm (q=2,d=1,p=4)");
    Eigen::VectorXd s1(1), t1(1);
    s1 << 0.8;
    t1 << 1.2;
    check_report(group_oracle_BC(1, Field::complex_field(), 3, ChamberPoint(Chamber::B, s1),
                                 ChamberPoint(Chamber::B, t1), 20000, RngStream(4, 0)),
                 "one-step convolution vs group arm (q=1,d=2,p=3)");
    check_report(group_oracle_A(2, Field::real(), two_atom(Chamber::A), 2, 10000,
                                RngStream(4003, 0)),
                 "A-case product oracle (q=2,d=1,k=2)");
}

// ---------------------------------------------------------------------------
// Criterion 5: laws of large numbers.
void criterion_5() {
    check_report(lln_experiment(two_atom(Chamber::B),
                                CaseParams::case_bc(BcParams(2, Field::real(), 3.5)), 2000, 200,
                                100000, RngStream(5001, 0)),
                 "LLN BC (q=2,d=1,p=3.5,k=2000,R=200)");
    check_report(lln_experiment(two_atom(Chamber::A), CaseParams::case_a(2, Field::real()), 2000,
                                200, 100000, RngStream(5002, 0)),
                 "LLN A (q=2,d=1,k=2000,R=200)");
}

// ---------------------------------------------------------------------------
// Criterion 6: central limit theorems and degenerate detection.
void criterion_6() {
    check_report(clt_experiment(two_atom(Chamber::B),
                                CaseParams::case_bc(BcParams(2, Field::real(), 3.5)), 500, 2000,
                                100000, 0.001, RngStream(6001, 0)),
                 "CLT BC (q=2,d=1,p=3.5,k=500,R=2000)");
    check_report(clt_experiment(two_atom(Chamber::A), CaseParams::case_a(2, Field::real()), 500,
                                2000, 100000, 0.001, RngStream(6002, 0)),
                 "CLT A (q=2,d=1,k=500,R=2000)");
    const ExperimentReport deg_bc = clt_experiment(
        DiscreteMeasure::point_mass(ChamberPoint::zero(Chamber::B, 2)),
        CaseParams::case_bc(BcParams(2, Field::real(), 3.5)), 200, 1000, 500, 0.001,
        RngStream(6003, 0));
    check(deg_bc.degenerate, "degenerate branch triggers for nu = delta_0 (BC)");
    const DiscreteMeasure diag({pt(Chamber::A, {1.0, 1.0}), pt(Chamber::A, {0.4, 0.4})},
                               {0.5, 0.5});
    const ExperimentReport deg_a =
        clt_experiment(diag, CaseParams::case_a(2, Field::real()), 200, 1000, 5000, 0.001,
                       RngStream(6004, 0));
    check(deg_a.degenerate, "degenerate branch triggers for A-case nu supported in D_q");
    const ExperimentReport generic = clt_experiment(
        two_atom(Chamber::B), CaseParams::case_bc(BcParams(2, Field::real(), 4.0)), 200, 1000,
        20000, 0.001, RngStream(6005, 0));
    check(!generic.degenerate, "degenerate branch stays off for a generic measure");
}

// ---------------------------------------------------------------------------
// Criterion 7: rank classification of local and measure covariances.
void criterion_7() {
    RngStream rng(7001, 0);
    {
        const SpectralParams sp = SpectralParams::case_a(2, Field::real());
        auto eigs = eigenvalues_with_stderr(sigma2_local(pt(Chamber::A, {2.0, 0.6}), sp, 100000, rng));
        check(std::abs(eigs[0].first) <= 3.0 * eigs[0].second && eigs[1].first > 3.0 * eigs[1].second,
              "A-case Sigma^2(t), non-diagonal t: one null and q-1 positive eigenvalues");
    }
    {
        const SpectralParams sp = SpectralParams::case_a(3, Field::real());
        auto eigs =
            eigenvalues_with_stderr(sigma2_local(pt(Chamber::A, {1.5, 0.3, -0.9}), sp, 100000, rng));
        check(std::abs(eigs[0].first) <= 3.0 * eigs[0].second && eigs[1].first > 3.0 * eigs[1].second &&
                  eigs[2].first > 3.0 * eigs[2].second,
              "A-case q=3 rank q-1 pattern");
    }
    {
        const SpectralParams sp = SpectralParams::case_bc(BcParams(2, Field::real(), 3.5));
        auto eigs =
            eigenvalues_with_stderr(sigma2_local(pt(Chamber::B, {1.2, 0.4}), sp, 100000, rng));
        check(eigs[0].first > 3.0 * eigs[0].second && eigs[1].first > 3.0 * eigs[1].second,
              "BC Sigma^2(t) full rank for t != 0");
    }
    {
        const SpectralParams sp = SpectralParams::case_bc(BcParams(2, Field::real(), 3.5));
        auto eigs = eigenvalues_with_stderr(covariance(two_atom(Chamber::B), sp, 100000, rng));
        check(eigs[0].first > 3.0 * eigs[0].second, "BC Sigma^2(nu) full rank for nu != delta_0",
              "lambda_min=" + fmt(eigs[0].first) + " se=" + fmt(eigs[0].second));
    }
}

// ---------------------------------------------------------------------------
// Criterion 8: oscillation and drift monitors along rays up to t_1 = 50.
void criterion_8() {
    const std::vector<double> cvals = {2, 5, 10, 18, 27, 38, 50};
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    const Eigen::VectorXd dir = (Eigen::VectorXd(2) << 1.0, 0.4).finished();
    const Eigen::VectorXd ldir = (Eigen::VectorXd(2) << 1.0, 0.6).finished();
    check_report(ray_monitor(SpectralParams::case_a(2, Field::real()), dir, cvals, 100000,
                             RngStream(8001, 0)),
                 "drift and m11 growth monitor, A case");
    check_report(ray_monitor(SpectralParams::case_bc(BcParams(2, Field::real(), 3.5)), dir, cvals,
                             100000, RngStream(8002, 0)),
                 "drift and m11 growth monitor, BC case");
    check_report(oscillation_monitor(SpectralParams::case_a(2, Field::real()), dir, cvals, ldir,
                                     eps, 200000, RngStream(8003, 0)),
                 "oscillation monitor, A case");
    check_report(oscillation_monitor(SpectralParams::case_bc(BcParams(2, Field::real(), 3.5)), dir,
                                     cvals, ldir, eps, 200000, RngStream(8004, 0)),
                 "oscillation monitor, BC case");
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical reproducibility through the CLI binary.
void criterion_9() {
#ifndef WEYLWALK_CLI_PATH
    check(false, "CLI path not wired into the acceptance build");
#else
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "weylwalk_acceptance";
    fs::create_directories(dir);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    auto run_cli = [&](const std::string& args, const fs::path& out) {
        std::ostringstream cmd;
        cmd << WEYLWALK_CLI_PATH << " " << args << " --out " << out.string() << " >/dev/null 2>&1";
        return std::system(cmd.str().c_str());
    };
    const std::string lln_args =
        "lln --case bc --q 2 --d 1 --p 3.5 --nu \"(1,0.3):0.5;(2,1):0.5\" "
        "--k 150 --R 60 --n-mc 20000 --seed 7 --workers 1";
    const int rc1 = run_cli(lln_args, dir / "a.json");
    const int rc2 = run_cli(lln_args, dir / "b.json");
    check(rc1 == 0 && rc2 == 0, "CLI lln runs exit 0");
    check(!slurp(dir / "a.json").empty() && slurp(dir / "a.json") == slurp(dir / "b.json"),
          "identical seed and worker count give byte-identical artifacts");

    const std::string walk_args =
        "walk --case a --q 2 --d 2 --nu \"(1,0.3):0.5;(2,1):0.5\" --k 40 --seed 3 --format csv";
    const int rc3 = run_cli(walk_args, dir / "w1.csv");
    const int rc4 = run_cli(walk_args, dir / "w2.csv");
    check(rc3 == 0 && rc4 == 0 && slurp(dir / "w1.csv") == slurp(dir / "w2.csv"),
          "trajectory CSV reproducible from (config, seed)");

    // Config rejection exit code.
    const int rc5 = std::system((std::string(WEYLWALK_CLI_PATH) +
                                 " walk --case bc --q 2 --d 1 --p 3 --nu \"(1,0.3):1\" "
                                 ">/dev/null 2>&1")
                                    .c_str());
    check(WEXITSTATUS(rc5) == 2, "boundary p rejected with exit code 2");
#endif
}

void run_criterion(int which) {
    const auto t0 = std::chrono::steady_clock::now();
    switch (which) {
        case 1: criterion_1(); break;
        case 2: criterion_2(); break;
        case 3: criterion_3(); break;
        case 4: criterion_4(); break;
        case 5: criterion_5(); break;
        case 6: criterion_6(); break;
        case 7: criterion_7(); break;
        case 8: criterion_8(); break;
        case 9: criterion_9(); break;
        default: throw std::invalid_argument("criterion must be 1..9");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << which << " wall time: " << secs << " s\n";
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        run_criterion(std::atoi(argv[1]));
    } else {
        for (int c = 1; c <= 9; ++c) {
            std::cout << "=== criterion " << c << " ===\n";
            run_criterion(c);
        }
    }
    return g_failures == 0 ? 0 : 1;
}
