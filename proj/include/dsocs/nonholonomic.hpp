#pragma once

#include <functional>
#include <string>
#include <utility>

#include "dsocs/linalg.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// Builds a discrete second-order system from first-order discrete
/// constraint data: a residual on pairs whose zero set is the discrete
/// constraint space, and a distribution basis at the middle point spanning
/// the allowed variations.
///
/// A triple belongs to the constraint set when both of its pairs are
/// admissible. The step equations only impose admissibility of the new pair
/// (q1, q2); admissibility of (q0, q1) is inherited from the previous step,
/// and the seed pair is checked when a flow starts.
inline DiscreteSystem from_discrete_nonholonomic(
    std::size_t dim, double h, std::function<double(const Vec&, const Vec&)> lagrangian,
    std::function<Vec(const Vec&, const Vec&)> pair_residual,
    std::function<Mat(const Vec&)> distribution_basis, std::size_t n_constraints,
    std::size_t n_basis, std::string name = "nonholonomic") {
    DiscreteSystem sys;
    sys.dim = dim;
    sys.h = h;
    sys.name = std::move(name);
    sys.lagrangian = std::move(lagrangian);
    sys.n_kin = n_constraints;
    sys.n_basis = n_basis;

    if (pair_residual) {
        sys.pair_residual = pair_residual;
        sys.kinematic_residual = [pair_residual](const Vec&, const Vec& q1, const Vec& q2) {
            return pair_residual(q1, q2);
        };
    } else {
        sys.kinematic_residual = [](const Vec&, const Vec&, const Vec&) { return Vec{}; };
    }

    sys.variational_basis = [basis = std::move(distribution_basis)](const Vec&, const Vec& q1,
                                                                    const Vec&) {
        return basis(q1);
    };
    return sys;
}

} // namespace dsocs
