#pragma once

#include "weylwalk/matrix.hpp"
#include "weylwalk/params.hpp"
#include "weylwalk/rng.hpp"

#include <vector>

namespace weylwalk {

/// Haar-distributed unitary over U(q, F): Ginibre matrix of F-Gaussians,
/// orthonormalized with the positive-diagonal convention that makes the
/// law exactly Haar.
MatrixF haar_unitary(int q, Field field, RngStream& rng);

/// Haar on SO(q): orthogonal Haar with a sign flip of the last column when
/// the determinant is negative.
MatrixF haar_special_orthogonal(int q, RngStream& rng);

/// Row vector y in F^q with ||y|| < 1 and density proportional to
/// (1 - ||y||^2)^a: uniform direction, squared radius Beta(dq/2, a+1).
MatrixF ball_point(int q, Field field, double a, RngStream& rng);

/// The triangular map carrying independent ball points to the matrix ball:
/// row j is y_j (I - y_{j-1}^* y_{j-1})^{1/2} ... (I - y_1^* y_1)^{1/2}.
MatrixF p_map(const std::vector<MatrixF>& ys);

/// Draw from the matrix-ball measure m_p via the map above, with the radial
/// exponents a_j = d(p - q - j + 1)/2 - 1. Valid on all of p > 2q - 1.
MatrixF sample_mp(const BcParams& params, RngStream& rng);

/// Independent rejection-sampling oracle for m_p: accept/reject from the
/// uniform measure on the matrix ball. Needs a bounded density, i.e.
/// exponent d(p/2 + 1/2 - q) - 1 >= 0.
MatrixF sample_mp_rejection(const BcParams& params, RngStream& rng);

/// Density exponent of m_p: d(p/2 + 1/2 - q) - 1.
double mp_exponent(const BcParams& params);

} // namespace weylwalk
