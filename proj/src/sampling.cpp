#include "weylwalk/sampling.hpp"

#include "weylwalk/algebra.hpp"

#include <cmath>

namespace weylwalk {

namespace {

FScalar gaussian_scalar(Field field, RngStream& rng) {
    FScalar s(rng.normal());
    if (field.d >= 2) s.x = rng.normal();
    if (field.d == 4) {
        s.y = rng.normal();
        s.z = rng.normal();
    }
    return s;
}

// <x, y> = sum conj(x_i) y_i over column vectors stored as columns j of m.
FScalar column_inner(const MatrixF& m, int cj, const MatrixF& n, int ck) {
    FScalar acc;
    for (int i = 0; i < m.rows; ++i) acc += m.at(i, cj).conj() * n.at(i, ck);
    return acc;
}

} // namespace

MatrixF haar_unitary(int q, Field field, RngStream& rng) {
    if (q < 1) throw std::invalid_argument("haar_unitary: q must be >= 1");
    MatrixF g(field, q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) g.at(i, j) = gaussian_scalar(field, rng);
    // Modified Gram-Schmidt over F, run twice for orthogonality near machine
    // precision. The normalization r_jj > 0 is the positive-diagonal R
    // convention, so the column frame is exactly Haar.
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < q; ++j) {
            for (int k = 0; k < j; ++k) {
                const FScalar c = column_inner(g, k, g, j);
                for (int i = 0; i < q; ++i) g.at(i, j) = g.at(i, j) - g.at(i, k) * c;
            }
            double nrm = 0.0;
            for (int i = 0; i < q; ++i) nrm += g.at(i, j).norm2();
            nrm = std::sqrt(nrm);
            for (int i = 0; i < q; ++i) g.at(i, j) = g.at(i, j) / nrm;
        }
    }
    return g;
}

MatrixF haar_special_orthogonal(int q, RngStream& rng) {
    MatrixF u = haar_unitary(q, Field::real(), rng);
    double det = 1.0;
    {
        const Eigen::MatrixXcd e = u.embed();
        det = Eigen::PartialPivLU<Eigen::MatrixXcd>(e).determinant().real();
    }
    if (det < 0.0)
        for (int i = 0; i < q; ++i) u.at(i, q - 1) = -u.at(i, q - 1);
    return u;
}

MatrixF ball_point(int q, Field field, double a, RngStream& rng) {
    if (q < 1) throw std::invalid_argument("ball_point: q must be >= 1");
    if (!(a > -1.0)) throw std::invalid_argument("ball_point: exponent must exceed -1");
    const int n = field.d * q;
    std::vector<double> dir(n);
    double nrm2;
    do {
        nrm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            dir[i] = rng.normal();
            nrm2 += dir[i] * dir[i];
        }
    } while (nrm2 == 0.0);
    double r2;
    do { r2 = rng.beta(0.5 * n, a + 1.0); } while (!(r2 < 1.0));
    const double scale = std::sqrt(r2 / nrm2);
    MatrixF y(field, 1, q);
    for (int j = 0; j < q; ++j) {
        FScalar s;
        s.w = dir[field.d * j] * scale;
        if (field.d >= 2) s.x = dir[field.d * j + 1] * scale;
        if (field.d == 4) {
            s.y = dir[field.d * j + 2] * scale;
            s.z = dir[field.d * j + 3] * scale;
        }
        y.at(0, j) = s;
    }
    return y;
}

MatrixF p_map(const std::vector<MatrixF>& ys) {
    if (ys.empty()) throw std::invalid_argument("p_map: no rows");
    const int q = ys[0].cols;
    const Field field = ys[0].field;
    MatrixF w(field, static_cast<int>(ys.size()), q);
    MatrixF contraction = MatrixF::identity(field, q);
    for (size_t j = 0; j < ys.size(); ++j) {
        if (ys[j].rows != 1 || ys[j].cols != q) throw std::invalid_argument("p_map: rows must be 1 x q");
        const MatrixF row = ys[j] * contraction;
        for (int c = 0; c < q; ++c) w.at(static_cast<int>(j), c) = row.at(0, c);
        if (j + 1 < ys.size()) {
            MatrixF gram = ys[j].adjoint() * ys[j];
            MatrixF complement = MatrixF::identity(field, q) + gram * (-1.0);
            contraction = psd_sqrt(complement) * contraction;
        }
    }
    return w;
}

double mp_exponent(const BcParams& params) {
    return params.field.d * (params.p / 2.0 + 0.5 - params.q) - 1.0;
}

MatrixF sample_mp(const BcParams& params, RngStream& rng) {
    params.validate();
    const int q = params.q;
    const double d = params.field.d;
    std::vector<MatrixF> ys;
    ys.reserve(q);
    for (int j = 1; j <= q; ++j) {
        const double a = d * (params.p - q - j + 1.0) / 2.0 - 1.0;
        ys.push_back(ball_point(q, params.field, a, rng));
    }
    return p_map(ys);
}

MatrixF sample_mp_rejection(const BcParams& params, RngStream& rng) {
    params.validate();
    const double expo = mp_exponent(params);
    if (expo < 0.0)
        throw std::invalid_argument("sample_mp_rejection: unbounded density (exponent < 0), oracle unsupported");
    const int q = params.q;
    for (;;) {
        // Uniform on the matrix ball by rejection from the entrywise cube.
        MatrixF w(params.field, q, q);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) {
                FScalar s;
                s.w = rng.uniform(-1.0, 1.0);
                if (params.field.d >= 2) s.x = rng.uniform(-1.0, 1.0);
                if (params.field.d == 4) {
                    s.y = rng.uniform(-1.0, 1.0);
                    s.z = rng.uniform(-1.0, 1.0);
                }
                w.at(i, j) = s;
            }
        if (largest_singular_value(w) > 1.0) continue;
        if (expo == 0.0) return w;
        const MatrixF gram = w.adjoint() * w;
        MatrixF complement = MatrixF::identity(params.field, q) + gram * (-1.0);
        const Eigen::MatrixXcd e = complement.embed();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
        double logdet = 0.0;
        bool ok = true;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double lam = es.eigenvalues()[i];
            if (lam <= 0.0) { ok = false; break; }
            logdet += std::log(lam);
        }
        logdet /= params.field.embed_factor();
        if (!ok) continue;
        // Density <= 1, so accept with probability Delta(I - w^*w)^expo.
        if (std::log(rng.uniform_pos()) < expo * logdet) return w;
    }
}

} // namespace weylwalk
