#pragma once

#include "weylwalk/chamber.hpp"
#include "weylwalk/matrix.hpp"

#include <complex>
#include <vector>

namespace weylwalk {

/// |det m|, with the Dieudonne convention det(A) = (det_C A)^{1/2} over H.
double det_modulus(const MatrixF& m);

/// ln Delta_r(x) for r = 1..q of a Hermitian positive definite x, read off
/// a Cholesky factorization of the complex embedding. The log form is the
/// one all moment-function code consumes; it stays finite long after the
/// minors themselves overflow.
Eigen::VectorXd log_principal_minors(const MatrixF& x);

/// Delta_r(x) of a Hermitian positive definite x.
double principal_minor(const MatrixF& x, int r);

/// Power function Delta_lambda(x) = prod_r Delta_r(x)^{lambda_r - lambda_{r+1}}
/// (with lambda_{q+1} = 0), powers of positive reals via the principal log.
std::complex<double> power_function(const MatrixF& x, const Eigen::VectorXcd& lambda);

/// Same, from precomputed log-minors.
std::complex<double> power_function_from_logs(const Eigen::VectorXd& log_minors,
                                              const Eigen::VectorXcd& lambda);

/// Ordered singular values sigma_1 >= ... >= sigma_min(rows,cols) >= 0.
/// Computed on the complex embedding; for H the doubled values are
/// deduplicated.
Eigen::VectorXd singular_spectrum(const MatrixF& m);

/// ln of the ordered singular values of diag(e^row_log) * n * diag(e^col_log),
/// where `n` is a complex matrix and the scale vectors live at embedding
/// level. Exact in the scales: products of leading singular values are taken
/// from the largest singular value of the corresponding exterior power, so
/// the result stays accurate for scale spreads far beyond double range.
Eigen::VectorXd log_singular_values_scaled(const Eigen::MatrixXcd& n,
                                           const Eigen::VectorXd& row_log,
                                           const Eigen::VectorXd& col_log);

/// F-level wrapper: scales are per F-row/column of `n`; returns the q
/// deduplicated log singular values, descending.
Eigen::VectorXd log_singular_spectrum(const MatrixF& n,
                                      const Eigen::VectorXd& row_log,
                                      const Eigen::VectorXd& col_log);

/// ln Delta_r, r = 1..q, of the Gram matrix (D u)^* (D u) = u^* D^2 u with
/// D = diag(e^{log_d}), via the Cauchy-Binet expansion
///   Delta_r = sum_I (prod_{i in I} e^{2 log_d_i}) |det u[I, 1:r]|^2
/// evaluated in log scale, so arbitrary grading in log_d stays exact.
Eigen::VectorXd log_gram_minors(const Eigen::VectorXd& log_d, const MatrixF& u);

/// Same for the Gram matrix of a D u with an additional O(1) square factor
/// a on the left: ln Delta_r((a D u)^* (a D u)).
Eigen::VectorXd log_gram_minors(const MatrixF& a, const Eigen::VectorXd& log_d, const MatrixF& u);

/// ln sigma_sing(g) as a type A chamber point. Requires sigma_q > 0.
ChamberPoint chamber_project_A(const MatrixF& g);

/// arcosh of the singular values of the upper-left q x q block, as a type B
/// chamber point. Values in [1 - 1e-9, 1] are clamped to 1 before arcosh;
/// anything below is a domain error.
ChamberPoint chamber_project_BC(const MatrixF& g, int q);

/// diag(e^{t_1}, ..., e^{t_q}) over the given field.
MatrixF a_matrix_A(const ChamberPoint& t, Field field);

/// The (q+p) x (q+p) block matrix [[cosh t, sinh t, 0], [sinh t, cosh t, 0],
/// [0, 0, I_{p-q}]] over the given field; needs p > q.
MatrixF a_matrix_BC(const ChamberPoint& t, int p, Field field);

/// g(t,u,w) = u^* (cosh t + sinh t w)(cosh t + sinh t w)^* u for t of type B,
/// u unitary and w in the matrix ball. Hermitian PSD by construction.
MatrixF g_matrix(const ChamberPoint& t, const MatrixF& u, const MatrixF& w);

/// C_r(a) = binom(q,r)^{-1} sum over r-subsets of products, via the
/// elementary-symmetric-polynomial recursion.
double elementary_symmetric_mean(const Eigen::VectorXd& a, int r);

/// Hermitian PSD square root via eigendecomposition of the embedding.
MatrixF psd_sqrt(const MatrixF& h);

/// Largest singular value (handy validation helper).
double largest_singular_value(const MatrixF& m);

/// Max-norm unitarity defect ||u^*u - I||_max.
double unitary_defect(const MatrixF& u);

// Small stable scalar helpers shared across modules.
double log_cosh(double t);                 // ln cosh t without overflow
double arcosh_from_log(double log_sigma);  // arcosh(e^L) for L >= 0
double binom(int n, int k);

namespace detail {
/// Throws if x is not Hermitian within 1e-10 relative to its largest entry.
void require_hermitian(const MatrixF& x, const char* who);
} // namespace detail

} // namespace weylwalk
