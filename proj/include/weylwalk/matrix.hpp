#pragma once

#include "weylwalk/field.hpp"

#include <Eigen/Dense>
#include <vector>

namespace weylwalk {

/// Dense matrix over F = R, C or H with a canonical complex embedding.
/// Entries are stored row-major as FScalar; for F = H the embedding maps
/// each entry a + bi + cj + dk to the 2x2 complex block
/// [[a+bi, c+di], [-(c-di), a-bi]], so the leading r x r block of the
/// quaternion matrix embeds to the leading 2r x 2r complex block.
struct MatrixF {
    Field field;
    int rows = 0, cols = 0;
    std::vector<FScalar> a;

    MatrixF() : field(Field::real()) {}
    MatrixF(Field f, int r, int c) : field(f), rows(r), cols(c), a(static_cast<size_t>(r) * c) {
        if (r < 0 || c < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static MatrixF identity(Field f, int n) {
        MatrixF m(f, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = FScalar(1.0);
        return m;
    }
    static MatrixF zero(Field f, int r, int c) { return MatrixF(f, r, c); }

    FScalar& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const FScalar& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }

    MatrixF adjoint() const {
        MatrixF m(field, cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj();
        return m;
    }

    MatrixF operator*(const MatrixF& o) const {
        if (cols != o.rows) throw std::invalid_argument("matrix product dimension mismatch");
        MatrixF m(field, rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const FScalar& aik = at(i, k);
                for (int j = 0; j < o.cols; ++j) m.at(i, j) += aik * o.at(k, j);
            }
        return m;
    }

    MatrixF operator+(const MatrixF& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix sum dimension mismatch");
        MatrixF m(field, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] + o.a[i];
        return m;
    }

    MatrixF operator*(double s) const {
        MatrixF m(field, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] * s;
        return m;
    }

    /// Left-multiply row i by the real scalar d[i].
    MatrixF scale_rows(const Eigen::VectorXd& d) const {
        MatrixF m(field, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j) * d[i];
        return m;
    }

    /// Right-multiply column j by the real scalar d[j].
    MatrixF scale_cols(const Eigen::VectorXd& d) const {
        MatrixF m(field, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j) * d[j];
        return m;
    }

    MatrixF block(int i0, int j0, int r, int c) const {
        if (i0 < 0 || j0 < 0 || i0 + r > rows || j0 + c > cols) throw std::invalid_argument("block out of range");
        MatrixF m(field, r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
        return m;
    }

    double max_abs() const {
        double v = 0.0;
        for (const auto& e : a) v = std::max(v, e.abs());
        return v;
    }

    /// Canonical complex embedding: identity map for R and C, per-entry
    /// 2x2 blocks for H.
    Eigen::MatrixXcd embed() const {
        const int f = field.embed_factor();
        Eigen::MatrixXcd e(rows * f, cols * f);
        if (f == 1) {
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) e(i, j) = std::complex<double>(at(i, j).w, at(i, j).x);
        } else {
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) {
                    const FScalar& q = at(i, j);
                    const std::complex<double> al(q.w, q.x), be(q.y, q.z);
                    e(2 * i, 2 * j) = al;
                    e(2 * i, 2 * j + 1) = be;
                    e(2 * i + 1, 2 * j) = -std::conj(be);
                    e(2 * i + 1, 2 * j + 1) = std::conj(al);
                }
        }
        return e;
    }

    /// Inverse of embed(). Averages over the block symmetry, so small
    /// numerical violations of the embedding structure are projected out.
    static MatrixF unembed(const Eigen::MatrixXcd& e, Field field) {
        const int f = field.embed_factor();
        if (e.rows() % f != 0 || e.cols() % f != 0) throw std::invalid_argument("unembed: dimension not divisible");
        MatrixF m(field, static_cast<int>(e.rows()) / f, static_cast<int>(e.cols()) / f);
        if (f == 1) {
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) {
                    const auto z = e(i, j);
                    m.at(i, j) = field.tag == FieldTag::Real ? FScalar(z.real()) : FScalar(z.real(), z.imag());
                }
        } else {
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) {
                    const auto al = 0.5 * (e(2 * i, 2 * j) + std::conj(e(2 * i + 1, 2 * j + 1)));
                    const auto be = 0.5 * (e(2 * i, 2 * j + 1) - std::conj(e(2 * i + 1, 2 * j)));
                    m.at(i, j) = FScalar(al.real(), al.imag(), be.real(), be.imag());
                }
        }
        return m;
    }
};

} // namespace weylwalk
