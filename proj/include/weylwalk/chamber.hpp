#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace weylwalk {

enum class Chamber { A, B };

/// Ordered point of the Weyl chamber of type A (non-increasing coordinates)
/// or type B (non-increasing and nonnegative).
struct ChamberPoint {
    Chamber chamber = Chamber::A;
    Eigen::VectorXd v;

    ChamberPoint() = default;
    ChamberPoint(Chamber c, Eigen::VectorXd values) : chamber(c), v(std::move(values)) { validate(); }

    static ChamberPoint zero(Chamber c, int q) { return ChamberPoint(c, Eigen::VectorXd::Zero(q)); }

    int q() const { return static_cast<int>(v.size()); }

    bool is_zero() const {
        for (int i = 0; i < v.size(); ++i)
            if (v[i] != 0.0) return false;
        return true;
    }

    /// All coordinates equal (the diagonal ray of the A chamber).
    bool is_diagonal() const {
        for (int i = 1; i < v.size(); ++i)
            if (v[i] != v[0]) return false;
        return true;
    }

    void validate() const {
        if (v.size() < 1) throw std::invalid_argument("chamber point needs q >= 1");
        for (int i = 0; i + 1 < v.size(); ++i)
            if (!(v[i] >= v[i + 1])) throw std::invalid_argument("chamber point coordinates must be non-increasing");
        if (chamber == Chamber::B && !(v[v.size() - 1] >= 0.0))
            throw std::invalid_argument("type B chamber point needs t_q >= 0");
        for (int i = 0; i < v.size(); ++i)
            if (!std::isfinite(v[i])) throw std::invalid_argument("chamber point coordinates must be finite");
    }
};

} // namespace weylwalk
