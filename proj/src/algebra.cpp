#include "weylwalk/algebra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <numeric>

namespace weylwalk {

namespace {

// Subsets of {0..n-1} of size r in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(r);
    std::iota(c.begin(), c.end(), 0);
    for (;;) {
        out.push_back(c);
        int i = r - 1;
        while (i >= 0 && c[i] == n - r + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

double sum_top(const Eigen::VectorXd& v, int r) {
    std::vector<double> s(v.data(), v.data() + v.size());
    std::sort(s.begin(), s.end(), std::greater<double>());
    double acc = 0.0;
    for (int i = 0; i < r; ++i) acc += s[i];
    return acc;
}

// ln of prod_{i<=r} sigma_i(D_row N D_col) = ln sigma_max of the r-th
// exterior power, whose entries are the r x r minors of N carrying the
// subset scale factors.
double log_sigma_product(const Eigen::MatrixXcd& n, const Eigen::VectorXd& row_log,
                         const Eigen::VectorXd& col_log, int r) {
    const int dim = static_cast<int>(n.rows());
    const double top = sum_top(row_log, r) + sum_top(col_log, r);
    if (r == dim) {
        const std::complex<double> det = Eigen::PartialPivLU<Eigen::MatrixXcd>(n).determinant();
        return top + std::log(std::abs(det));
    }
    const auto subs = subsets(dim, r);
    const int m = static_cast<int>(subs.size());
    std::vector<double> row_sum(m), col_sum(m);
    for (int i = 0; i < m; ++i) {
        double rs = 0.0, cs = 0.0;
        for (int k : subs[i]) {
            rs += row_log[k];
            cs += col_log[k];
        }
        row_sum[i] = rs;
        col_sum[i] = cs;
    }
    Eigen::MatrixXcd compound(m, m);
    Eigen::MatrixXcd minor(r, r);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) minor(a, b) = n(subs[i][a], subs[j][b]);
            const std::complex<double> det =
                r == 1 ? minor(0, 0) : Eigen::PartialPivLU<Eigen::MatrixXcd>(minor).determinant();
            // Exponent <= 0 by choice of `top`; underflow of far-off-scale
            // entries is harmless for the largest singular value.
            compound(i, j) = det * std::exp(row_sum[i] + col_sum[j] - top);
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(compound);
    return top + std::log(svd.singularValues()[0]);
}

Eigen::VectorXd duplicate_for_embedding(const Eigen::VectorXd& v, int f) {
    if (f == 1) return v;
    Eigen::VectorXd out(v.size() * f);
    for (int i = 0; i < v.size(); ++i)
        for (int k = 0; k < f; ++k) out[f * i + k] = v[i];
    return out;
}

} // namespace

namespace detail {

void require_hermitian(const MatrixF& x, const char* who) {
    if (!x.square()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
    const double scale = std::max(x.max_abs(), 1e-300);
    for (int i = 0; i < x.rows; ++i)
        for (int j = i; j < x.cols; ++j) {
            const FScalar d = x.at(i, j) - x.at(j, i).conj();
            if (d.abs() > 1e-10 * scale)
                throw std::invalid_argument(std::string(who) + ": matrix not Hermitian within tolerance");
        }
}

} // namespace detail

double det_modulus(const MatrixF& m) {
    if (!m.square()) throw std::invalid_argument("det_modulus: matrix must be square");
    if (m.rows == 0) return 1.0;
    const Eigen::MatrixXcd e = m.embed();
    const std::complex<double> det = Eigen::PartialPivLU<Eigen::MatrixXcd>(e).determinant();
    const double ad = std::abs(det);
    return m.field.embed_factor() == 2 ? std::sqrt(ad) : ad;
}

Eigen::VectorXd log_principal_minors(const MatrixF& x) {
    detail::require_hermitian(x, "log_principal_minors");
    const int q = x.rows;
    const int f = x.field.embed_factor();
    const Eigen::MatrixXcd e = x.embed();
    Eigen::LLT<Eigen::MatrixXcd> llt(e);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("log_principal_minors: matrix not positive definite");
    const Eigen::MatrixXcd L = llt.matrixL();
    // ln det_C of the leading k x k embedded block is 2 * sum_{i<k} ln L_ii;
    // the Dieudonne convention divides the quaternion case by 2.
    Eigen::VectorXd out(q);
    double acc = 0.0;
    int k = 0;
    for (int r = 1; r <= q; ++r) {
        for (; k < r * f; ++k) acc += std::log(L(k, k).real());
        out[r - 1] = 2.0 * acc / f;
    }
    return out;
}

double principal_minor(const MatrixF& x, int r) {
    if (r < 1 || r > x.rows) throw std::invalid_argument("principal_minor: r out of range");
    return std::exp(log_principal_minors(x)[r - 1]);
}

std::complex<double> power_function_from_logs(const Eigen::VectorXd& log_minors,
                                              const Eigen::VectorXcd& lambda) {
    const int q = static_cast<int>(log_minors.size());
    if (lambda.size() != q) throw std::invalid_argument("power function: lambda size mismatch");
    std::complex<double> z(0.0, 0.0);
    for (int r = 0; r < q; ++r) {
        const std::complex<double> coef = lambda[r] - (r + 1 < q ? lambda[r + 1] : std::complex<double>(0.0));
        if (coef != std::complex<double>(0.0)) z += coef * log_minors[r];
    }
    return std::exp(z);
}

std::complex<double> power_function(const MatrixF& x, const Eigen::VectorXcd& lambda) {
    return power_function_from_logs(log_principal_minors(x), lambda);
}

Eigen::VectorXd singular_spectrum(const MatrixF& m) {
    const int f = m.field.embed_factor();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.embed());
    const Eigen::VectorXd s = svd.singularValues();
    const int k = static_cast<int>(s.size()) / f;
    Eigen::VectorXd out(k);
    for (int i = 0; i < k; ++i) out[i] = s[f * i];
    return out;
}

Eigen::VectorXd log_singular_values_scaled(const Eigen::MatrixXcd& n,
                                           const Eigen::VectorXd& row_log,
                                           const Eigen::VectorXd& col_log) {
    const int dim = static_cast<int>(n.rows());
    if (n.cols() != dim || row_log.size() != dim || col_log.size() != dim)
        throw std::invalid_argument("log_singular_values_scaled: square matrix and matching scales required");
    Eigen::VectorXd logp(dim + 1);
    logp[0] = 0.0;
    for (int r = 1; r <= dim; ++r) logp[r] = log_sigma_product(n, row_log, col_log, r);
    Eigen::VectorXd out(dim);
    for (int r = 1; r <= dim; ++r) out[r - 1] = logp[r] - logp[r - 1];
    // Ties can come out marginally misordered through independent sigma_max
    // computations; restore the contract.
    std::sort(out.data(), out.data() + dim, std::greater<double>());
    return out;
}

Eigen::VectorXd log_singular_spectrum(const MatrixF& n,
                                      const Eigen::VectorXd& row_log,
                                      const Eigen::VectorXd& col_log) {
    const int f = n.field.embed_factor();
    const Eigen::VectorXd ls = log_singular_values_scaled(
        n.embed(), duplicate_for_embedding(row_log, f), duplicate_for_embedding(col_log, f));
    if (f == 1) return ls;
    // Doubled quaternion values: average each adjacent pair.
    Eigen::VectorXd out(ls.size() / 2);
    for (int i = 0; i < out.size(); ++i) out[i] = 0.5 * (ls[2 * i] + ls[2 * i + 1]);
    return out;
}

namespace {

double logsumexp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

std::complex<double> subminor_det(const Eigen::MatrixXcd& m, const std::vector<int>& rows,
                                  const std::vector<int>& cols, Eigen::MatrixXcd& scratch) {
    const int r = static_cast<int>(rows.size());
    if (r == 1) return m(rows[0], cols[0]);
    scratch.resize(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) scratch(i, j) = m(rows[i], cols[j]);
    if (r == 2) return scratch(0, 0) * scratch(1, 1) - scratch(0, 1) * scratch(1, 0);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(scratch).determinant();
}

Eigen::VectorXd log_gram_minors_impl(const Eigen::MatrixXcd* a, const Eigen::VectorXd& log_d,
                                     const MatrixF& u) {
    const int q = u.rows;
    const int f = u.field.embed_factor();
    const int n = q * f;
    const Eigen::MatrixXcd ue = u.embed();
    Eigen::VectorXd ld(n);
    for (int i = 0; i < q; ++i)
        for (int k = 0; k < f; ++k) ld[f * i + k] = log_d[i];

    Eigen::MatrixXcd scratch;
    std::vector<int> lead;
    Eigen::VectorXd out(q);
    for (int r = 1; r <= q; ++r) {
        const int m = r * f;
        lead.resize(m);
        std::iota(lead.begin(), lead.end(), 0);
        const auto subs = subsets(n, m);
        std::vector<std::complex<double>> det_u(subs.size());
        std::vector<double> expo(subs.size());
        for (size_t j = 0; j < subs.size(); ++j) {
            det_u[j] = subminor_det(ue, subs[j], lead, scratch);
            double e = 0.0;
            for (int idx : subs[j]) e += ld[idx];
            expo[j] = e;
        }
        std::vector<double> terms;
        terms.reserve(subs.size());
        if (a == nullptr) {
            for (size_t j = 0; j < subs.size(); ++j) {
                const double au = std::abs(det_u[j]);
                if (au > 0.0) terms.push_back(2.0 * (expo[j] + std::log(au)));
            }
        } else {
            double emax = -std::numeric_limits<double>::infinity();
            for (double e : expo) emax = std::max(emax, e);
            for (size_t i = 0; i < subs.size(); ++i) {
                std::complex<double> s(0.0, 0.0);
                for (size_t j = 0; j < subs.size(); ++j) {
                    if (det_u[j] == std::complex<double>(0.0)) continue;
                    s += subminor_det(*a, subs[i], subs[j], scratch) * det_u[j] *
                         std::exp(expo[j] - emax);
                }
                const double as = std::abs(s);
                if (as > 0.0) terms.push_back(2.0 * (emax + std::log(as)));
            }
        }
        out[r - 1] = terms.empty() ? -std::numeric_limits<double>::infinity()
                                   : logsumexp(terms) / f;
    }
    return out;
}

} // namespace

Eigen::VectorXd log_gram_minors(const Eigen::VectorXd& log_d, const MatrixF& u) {
    if (log_d.size() != u.rows || !u.square())
        throw std::invalid_argument("log_gram_minors: scale/matrix size mismatch");
    return log_gram_minors_impl(nullptr, log_d, u);
}

Eigen::VectorXd log_gram_minors(const MatrixF& a, const Eigen::VectorXd& log_d, const MatrixF& u) {
    if (log_d.size() != u.rows || !u.square() || a.rows != u.rows || a.cols != u.cols)
        throw std::invalid_argument("log_gram_minors: scale/matrix size mismatch");
    const Eigen::MatrixXcd ae = a.embed();
    return log_gram_minors_impl(&ae, log_d, u);
}

ChamberPoint chamber_project_A(const MatrixF& g) {
    if (!g.square()) throw std::invalid_argument("chamber_project_A: matrix must be square");
    const Eigen::VectorXd s = singular_spectrum(g);
    Eigen::VectorXd t(s.size());
    for (int i = 0; i < s.size(); ++i) {
        if (!(s[i] > 1e-300)) throw std::domain_error("chamber_project_A: singular matrix");
        t[i] = std::log(s[i]);
    }
    return ChamberPoint(Chamber::A, t);
}

ChamberPoint chamber_project_BC(const MatrixF& g, int q) {
    if (g.rows < q || g.cols < q) throw std::invalid_argument("chamber_project_BC: block exceeds matrix");
    const Eigen::VectorXd s = singular_spectrum(g.block(0, 0, q, q));
    Eigen::VectorXd t(q);
    for (int i = 0; i < q; ++i) {
        double si = s[i];
        if (si < 1.0 - 1e-9)
            throw std::domain_error("chamber_project_BC: singular value below arcosh domain");
        if (si <= 1.0) si = 1.0;
        t[i] = std::acosh(si);
    }
    return ChamberPoint(Chamber::B, t);
}

MatrixF a_matrix_A(const ChamberPoint& t, Field field) {
    if (t.chamber != Chamber::A) throw std::invalid_argument("a_matrix_A needs a type A point");
    MatrixF m(field, t.q(), t.q());
    for (int i = 0; i < t.q(); ++i) m.at(i, i) = FScalar(std::exp(t.v[i]));
    return m;
}

MatrixF a_matrix_BC(const ChamberPoint& t, int p, Field field) {
    if (t.chamber != Chamber::B) throw std::invalid_argument("a_matrix_BC needs a type B point");
    const int q = t.q();
    if (p <= q) throw std::invalid_argument("a_matrix_BC needs p > q");
    MatrixF m(field, q + p, q + p);
    for (int i = 0; i < q; ++i) {
        m.at(i, i) = FScalar(std::cosh(t.v[i]));
        m.at(q + i, q + i) = FScalar(std::cosh(t.v[i]));
        m.at(i, q + i) = FScalar(std::sinh(t.v[i]));
        m.at(q + i, i) = FScalar(std::sinh(t.v[i]));
    }
    for (int i = 2 * q; i < q + p; ++i) m.at(i, i) = FScalar(1.0);
    return m;
}

MatrixF g_matrix(const ChamberPoint& t, const MatrixF& u, const MatrixF& w) {
    if (t.chamber != Chamber::B) throw std::invalid_argument("g_matrix needs a type B point");
    const int q = t.q();
    if (u.rows != q || u.cols != q || w.rows != q || w.cols != q)
        throw std::invalid_argument("g_matrix: dimension mismatch");
    if (unitary_defect(u) > 1e-10) throw std::invalid_argument("g_matrix: u not unitary within tolerance");
    if (largest_singular_value(w) > 1.0 + 1e-10)
        throw std::invalid_argument("g_matrix: w outside the matrix ball");
    // sinh 0 = 0 kills the w term and unitarity gives u^*u = I exactly.
    if (t.is_zero()) return MatrixF::identity(u.field, q);
    Eigen::VectorXd ch(q), sh(q);
    for (int i = 0; i < q; ++i) {
        ch[i] = std::cosh(t.v[i]);
        sh[i] = std::sinh(t.v[i]);
    }
    MatrixF m = w.scale_rows(sh);
    for (int i = 0; i < q; ++i) m.at(i, i) += FScalar(ch[i]);
    const MatrixF g = u.adjoint() * (m * m.adjoint()) * u;
    // Symmetrize away the rounding skew.
    MatrixF out(g.field, q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) out.at(i, j) = (g.at(i, j) + g.at(j, i).conj()) * 0.5;
    return out;
}

double elementary_symmetric_mean(const Eigen::VectorXd& a, int r) {
    const int q = static_cast<int>(a.size());
    if (r < 1 || r > q) throw std::invalid_argument("elementary_symmetric_mean: r out of range");
    for (int i = 0; i < q; ++i)
        if (!(a[i] > 0.0)) throw std::invalid_argument("elementary_symmetric_mean: entries must be positive");
    std::vector<double> e(r + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < q; ++i)
        for (int k = std::min(i + 1, r); k >= 1; --k) e[k] += a[i] * e[k - 1];
    return e[r] / binom(q, r);
}

MatrixF psd_sqrt(const MatrixF& h) {
    detail::require_hermitian(h, "psd_sqrt");
    const Eigen::MatrixXcd e = h.embed();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
    const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd lam = es.eigenvalues();
    for (int i = 0; i < lam.size(); ++i) {
        if (lam[i] < -1e-10 * scale) throw std::domain_error("psd_sqrt: matrix has a negative eigenvalue");
        lam[i] = std::sqrt(std::max(lam[i], 0.0));
    }
    const Eigen::MatrixXcd s = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    return MatrixF::unembed(s, h.field);
}

double largest_singular_value(const MatrixF& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.embed());
    return svd.singularValues()[0];
}

double unitary_defect(const MatrixF& u) {
    const MatrixF p = u.adjoint() * u;
    double defect = 0.0;
    for (int i = 0; i < p.rows; ++i)
        for (int j = 0; j < p.cols; ++j) {
            FScalar d = p.at(i, j);
            if (i == j) d.w -= 1.0;
            defect = std::max(defect, d.abs());
        }
    return defect;
}

double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321215;
}

double arcosh_from_log(double log_sigma) {
    if (log_sigma < 0.0) throw std::domain_error("arcosh_from_log: argument below 1");
    if (log_sigma == 0.0) return 0.0;
    if (log_sigma > 0.5) return log_sigma + std::log1p(std::sqrt(1.0 - std::exp(-2.0 * log_sigma)));
    // Near 1: acosh(e^L) with e^{2L}-1 evaluated by expm1.
    const double x = std::exp(log_sigma);
    return std::log(x + std::sqrt(std::expm1(2.0 * log_sigma)));
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace weylwalk
