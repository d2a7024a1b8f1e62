#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "dsocs/continuous.hpp"
#include "dsocs/errors.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// Planar particle steered by a force orthogonal to its velocity so that its
/// path has a prescribed signed curvature k(x, y).
struct ParticleParams {
    double mass = 1.0;
    std::function<double(double, double)> curvature = [](double, double) { return 1.0; };
    double h = 0.1;
};

/// Midpoint-velocity / central-acceleration images of a triple.
namespace detail {
inline std::pair<Vec, Vec> triple_velocity_accel(const Vec& q0, const Vec& q1, const Vec& q2,
                                                 double h) {
    return {(0.5 / h) * (q2 - q0), (1.0 / (h * h)) * (q2 - 2.0 * q1 + q0)};
}
} // namespace detail

inline DiscreteSystem make_particle(const ParticleParams& params) {
    if (!(params.mass > 0.0)) throw DimensionError("make_particle: mass must be positive");
    if (params.h == 0.0) throw DimensionError("make_particle: time step must be nonzero");

    const double m = params.mass;
    const double h = params.h;
    const auto curvature = params.curvature;

    DiscreteSystem sys;
    sys.dim = 2;
    sys.h = h;
    sys.name = "particle";
    sys.coordinate_names = {"x", "y"};
    sys.n_kin = 1;
    sys.n_basis = 1;

    sys.lagrangian = [m, h](const Vec& q0, const Vec& q1) {
        const double dx = q1[0] - q0[0];
        const double dy = q1[1] - q0[1];
        return m * (dx * dx + dy * dy) / (2.0 * h);
    };
    sys.d1_lagrangian = [m, h](const Vec& q0, const Vec& q1) {
        return Vec{-m * (q1[0] - q0[0]) / h, -m * (q1[1] - q0[1]) / h};
    };
    sys.d2_lagrangian = [m, h](const Vec& q0, const Vec& q1) {
        return Vec{m * (q1[0] - q0[0]) / h, m * (q1[1] - q0[1]) / h};
    };

    // Signed discrete curvature of the triple minus the prescribed value at
    // the middle point.
    sys.kinematic_residual = [h, curvature](const Vec& q0, const Vec& q1, const Vec& q2) {
        const auto [v, a] = detail::triple_velocity_accel(q0, q1, q2, h);
        const double speed = norm2(v);
        if (speed < 1e-10)
            throw ConstraintDegeneracyError(
                "particle: midpoint velocity vanished; discrete curvature undefined");
        const double cross = v[0] * a[1] - a[0] * v[1];
        return Vec{cross / (speed * speed * speed) - curvature(q1[0], q1[1])};
    };

    // Variations along the midpoint velocity.
    sys.variational_basis = [h](const Vec& q0, const Vec&, const Vec& q2) {
        Mat basis(2, 1);
        basis(0, 0) = (q2[0] - q0[0]) / (2.0 * h);
        basis(1, 0) = (q2[1] - q0[1]) / (2.0 * h);
        return basis;
    };

    return sys;
}

/// The same system in continuous form, mainly for cross-validating the
/// generic discretizer against the hand-coded discrete system.
inline ContinuousSystem make_particle_continuous(double mass,
                                                 std::function<double(double, double)> curvature) {
    ContinuousSystem cont;
    cont.dim = 2;
    cont.name = "particle";
    cont.coordinate_names = {"x", "y"};
    cont.n_kin = 1;
    cont.n_basis = 1;

    cont.lagrangian = [mass](const Vec&, const Vec& qdot) {
        return 0.5 * mass * (qdot[0] * qdot[0] + qdot[1] * qdot[1]);
    };
    cont.kinematic_residual = [curvature](const Vec& q, const Vec& qdot, const Vec& qddot) {
        const double speed = norm2(qdot);
        if (speed < 1e-10)
            throw ConstraintDegeneracyError("particle: velocity vanished; curvature undefined");
        const double cross = qdot[0] * qddot[1] - qddot[0] * qdot[1];
        return Vec{cross / (speed * speed * speed) - curvature(q[0], q[1])};
    };
    cont.variational_basis = [](const Vec&, const Vec& qdot, const Vec&) {
        Mat basis(2, 1);
        basis(0, 0) = qdot[0];
        basis(1, 0) = qdot[1];
        return basis;
    };
    return cont;
}

} // namespace dsocs
