#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dsocs/linalg.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// A continuous second-order constrained Lagrangian system: L on TQ, a
/// kinematic residual on (q, qdot, qddot) and a variational basis there.
struct ContinuousSystem {
    std::size_t dim = 0;
    std::string name;
    std::vector<std::string> coordinate_names;

    std::function<double(const Vec&, const Vec&)> lagrangian;  // L(q, qdot)
    std::function<Vec(const Vec&, const Vec&, const Vec&)> kinematic_residual;  // n_kin values
    std::function<Mat(const Vec&, const Vec&, const Vec&)> variational_basis;   // dim x m

    std::size_t n_kin = 0;
    std::size_t n_basis = 0;
};

/// Builds the discrete system induced by the forward-difference Lagrangian
/// map and the central-difference constraint map:
///   L_d(q0, q1)        = h L(q0, (q1 - q0)/h)
///   (q, qdot, qddot)   = (q1, (q2 - q0)/(2h), (q2 - 2 q1 + q0)/h^2)
/// with the variational basis evaluated at the same image point.
inline DiscreteSystem discretize(const ContinuousSystem& cont, double h) {
    if (h == 0.0) throw DimensionError("discretize: time step must be nonzero");
    DiscreteSystem sys;
    sys.dim = cont.dim;
    sys.h = h;
    sys.name = cont.name + " (discretized)";
    sys.coordinate_names = cont.coordinate_names;
    sys.n_kin = cont.n_kin;
    sys.n_basis = cont.n_basis;

    const auto lagr = cont.lagrangian;
    sys.lagrangian = [lagr, h](const Vec& q0, const Vec& q1) {
        return h * lagr(q0, (1.0 / h) * (q1 - q0));
    };

    const auto image = [h](const Vec& q0, const Vec& q1, const Vec& q2) {
        const Vec qdot = (0.5 / h) * (q2 - q0);
        const Vec qddot = (1.0 / (h * h)) * (q2 - 2.0 * q1 + q0);
        return std::make_pair(qdot, qddot);
    };

    if (cont.kinematic_residual) {
        const auto kin = cont.kinematic_residual;
        sys.kinematic_residual = [kin, image](const Vec& q0, const Vec& q1, const Vec& q2) {
            const auto [qdot, qddot] = image(q0, q1, q2);
            return kin(q1, qdot, qddot);
        };
    }

    const auto basis = cont.variational_basis;
    sys.variational_basis = [basis, image](const Vec& q0, const Vec& q1, const Vec& q2) {
        const auto [qdot, qddot] = image(q0, q1, q2);
        return basis(q1, qdot, qddot);
    };

    return sys;
}

} // namespace dsocs
