#pragma once

#include <cmath>
#include <string>

#include "dsocs/linalg.hpp"
#include "dsocs/nonholonomic.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// Unconstrained particle in dim dimensions; the step map is exact linear
/// extrapolation.
inline DiscreteSystem make_free_particle(std::size_t dim, double h, double mass = 1.0) {
    DiscreteSystem sys;
    sys.dim = dim;
    sys.h = h;
    sys.name = "free";
    for (std::size_t i = 0; i < dim; ++i) sys.coordinate_names.push_back("q" + std::to_string(i + 1));
    sys.n_kin = 0;
    sys.n_basis = dim;

    sys.lagrangian = [mass, h](const Vec& q0, const Vec& q1) {
        double s = 0.0;
        for (std::size_t i = 0; i < q0.size(); ++i) {
            const double d = q1[i] - q0[i];
            s += d * d;
        }
        return mass * s / (2.0 * h);
    };
    sys.d1_lagrangian = [mass, h](const Vec& q0, const Vec& q1) {
        return (-mass / h) * (q1 - q0);
    };
    sys.d2_lagrangian = [mass, h](const Vec& q0, const Vec& q1) {
        return (mass / h) * (q1 - q0);
    };
    sys.kinematic_residual = [](const Vec&, const Vec&, const Vec&) { return Vec{}; };
    sys.variational_basis = [dim](const Vec&, const Vec&, const Vec&) {
        return Mat::identity(dim);
    };
    return sys;
}

/// Unconstrained harmonic oscillator, L = 1/2 |qdot|^2 - 1/2 omega^2 |q|^2,
/// discretized with the forward-difference Lagrangian map.
inline DiscreteSystem make_harmonic_oscillator(std::size_t dim, double h, double omega = 1.0) {
    DiscreteSystem sys;
    sys.dim = dim;
    sys.h = h;
    sys.name = "harmonic";
    for (std::size_t i = 0; i < dim; ++i) sys.coordinate_names.push_back("q" + std::to_string(i + 1));
    sys.n_kin = 0;
    sys.n_basis = dim;

    const double w2 = omega * omega;
    sys.lagrangian = [h, w2](const Vec& q0, const Vec& q1) {
        double kin = 0.0, pot = 0.0;
        for (std::size_t i = 0; i < q0.size(); ++i) {
            const double d = (q1[i] - q0[i]) / h;
            kin += d * d;
            pot += q0[i] * q0[i];
        }
        return h * (0.5 * kin - 0.5 * w2 * pot);
    };
    sys.kinematic_residual = [](const Vec&, const Vec&, const Vec&) { return Vec{}; };
    sys.variational_basis = [dim](const Vec&, const Vec&, const Vec&) {
        return Mat::identity(dim);
    };
    return sys;
}

/// Free planar particle constrained so consecutive differences lie in the
/// kernel of the covector `a` (a first-order linear constraint).
inline DiscreteSystem make_linear_constraint_system(const Vec& a, double h) {
    const double nrm = norm2(a);
    Vec tangent{-a[1] / nrm, a[0] / nrm};  // spans ker(a) in the plane
    DiscreteSystem free = make_free_particle(2, h);
    DiscreteSystem sys = from_discrete_nonholonomic(
        2, h, free.lagrangian,
        [a](const Vec& q0, const Vec& q1) {
            return Vec{a[0] * (q1[0] - q0[0]) + a[1] * (q1[1] - q0[1])};
        },
        [tangent](const Vec&) {
            Mat basis(2, 1);
            basis(0, 0) = tangent[0];
            basis(1, 0) = tangent[1];
            return basis;
        },
        1, 1, "nonholonomic-test");
    sys.d1_lagrangian = free.d1_lagrangian;
    sys.d2_lagrangian = free.d2_lagrangian;
    sys.coordinate_names = {"x", "y"};
    return sys;
}

/// Free planar particle confined to the leaves y = const of an integrable
/// distribution; trajectories stay on the leaf of their seed.
inline DiscreteSystem make_holonomic_leaf_system(double h) {
    DiscreteSystem free = make_free_particle(2, h);
    DiscreteSystem sys = from_discrete_nonholonomic(
        2, h, free.lagrangian,
        [](const Vec& q0, const Vec& q1) { return Vec{q1[1] - q0[1]}; },
        [](const Vec&) {
            Mat basis(2, 1);
            basis(0, 0) = 1.0;
            basis(1, 0) = 0.0;
            return basis;
        },
        1, 1, "holonomic-test");
    sys.d1_lagrangian = free.d1_lagrangian;
    sys.d2_lagrangian = free.d2_lagrangian;
    sys.coordinate_names = {"x", "y"};
    return sys;
}

/// Named bundle of the synthetic systems used throughout the test suite.
struct SystemCatalog {
    DiscreteSystem free_particle;
    DiscreteSystem harmonic;
    DiscreteSystem nonholonomic;
    DiscreteSystem holonomic;
};

inline SystemCatalog make_test_systems(double h = 0.1) {
    return {make_free_particle(2, h), make_harmonic_oscillator(2, h),
            make_linear_constraint_system({1.0, 2.0}, h), make_holonomic_leaf_system(h)};
}

} // namespace dsocs
