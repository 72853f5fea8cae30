#pragma once

#include "weylwalk/chamber.hpp"
#include "weylwalk/params.hpp"
#include "weylwalk/rng.hpp"

#include <vector>

namespace weylwalk {

/// Finitely supported probability measure on a chamber.
struct DiscreteMeasure {
    Chamber chamber = Chamber::A;
    std::vector<ChamberPoint> atoms;
    std::vector<double> weights;

    DiscreteMeasure() = default;
    DiscreteMeasure(std::vector<ChamberPoint> atoms_, std::vector<double> weights_);

    static DiscreteMeasure point_mass(const ChamberPoint& t);

    int q() const { return atoms.empty() ? 0 : atoms[0].q(); }
    void validate() const;
};

/// One random walk path on a chamber; points[0] is the identity 0.
struct Trajectory {
    CaseParams params;
    std::vector<ChamberPoint> points;
    uint64_t master_seed = 0;
    uint64_t stream_id = 0;
};

/// One draw from the type A double-coset convolution delta_s * delta_t,
/// realized through the group as ln sigma_sing(a_s u a_t) with Haar u.
ChamberPoint conv_step_A(const ChamberPoint& s, const ChamberPoint& t, Field field, RngStream& rng);

/// One draw from delta_s *_p delta_t on the type B chamber:
/// arcosh sigma_sing(sinh t w sinh s + cosh t v cosh s) with Haar v and
/// w distributed by the matrix-ball measure m_p.
ChamberPoint conv_step_BC(const ChamberPoint& s, const ChamberPoint& t, const BcParams& params,
                          RngStream& rng);

/// Dispatch on the chamber of `params`.
ChamberPoint conv_step(const ChamberPoint& s, const ChamberPoint& t, const CaseParams& params,
                       RngStream& rng);

/// Atom i with probability weights[i], by CDF inversion.
const ChamberPoint& measure_sample(const DiscreteMeasure& nu, RngStream& rng);

/// Time-homogeneous random walk of k steps driven by nu, started at the
/// identity.
Trajectory walk(const DiscreteMeasure& nu, int k, const CaseParams& params, RngStream& rng);

} // namespace weylwalk
