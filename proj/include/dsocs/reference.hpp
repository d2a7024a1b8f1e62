#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "dsocs/errors.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/pendulum.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// A continuous-time configuration path, sampled through a closure.
struct ContinuousTrajectory {
    std::function<Vec(double)> sampler;
    Vec operator()(double t) const { return sampler(t); }
};

/// Closed-form solution of the unit-curvature particle started at the
/// origin with velocity (1, 1): a unit circle traversed at speed sqrt(2).
inline Vec particle_exact(double t) {
    const double phase = std::sqrt(2.0) * t - M_PI / 4.0;
    return {std::cos(phase) - std::sqrt(2.0) / 2.0, std::sin(phase) + std::sqrt(2.0) / 2.0};
}

inline ContinuousTrajectory particle_exact_trajectory() {
    return {[](double t) { return particle_exact(t); }};
}

/// Accelerations of the constrained pendulum: the unforced theta equation
/// together with the expanded Lyapunov constraint form a linear 2x2 system
/// in (thetaddot, psiddot).
inline Vec pendulum_accel(const PendulumParams& params, const Vec& q, const Vec& qdot) {
    const Vec gv = pend::V_grad_qdot(params, qdot);
    const double row2_norm = std::sqrt(gv[0] * gv[0] + gv[1] * gv[1]);
    if (row2_norm < 1e-10)
        throw ConstraintDegeneracyError(
            "pendulum_accel: dV/dqdot vanished; the constraint does not determine "
            "accelerations at rest states");

    const Vec gq = pend::V_grad_q(params, q);
    Mat a(2, 2);
    a(0, 0) = params.I + params.J;
    a(0, 1) = params.J;
    a(1, 0) = gv[0];
    a(1, 1) = gv[1];
    Vec b{params.M * std::sin(q[0]),
          -pend::F(params, qdot) - gq[0] * qdot[0] - gq[1] * qdot[1]};
    return linear_solve(a, b);
}

/// Lagrange multiplier of the constraint force, determined a posteriori
/// from -J (thetaddot + psiddot).
inline double pendulum_multiplier(const PendulumParams& params, const Vec& q, const Vec& qdot) {
    const Vec acc = pendulum_accel(params, q, qdot);
    return -params.J * (acc[0] + acc[1]);
}

/// Classical RK4 on the first-order form of qddot = accel(q, qdot). Samples
/// are stored every `store_stride` internal steps and interpolated linearly
/// in between; comparison times that are multiples of the stored spacing
/// are reproduced exactly.
inline ContinuousTrajectory rk4_flow(
    const std::function<Vec(const Vec&, const Vec&)>& accel, Vec q0, Vec qdot0, double h_ref,
    double t_end, std::size_t store_stride = 1) {
    if (!(h_ref > 0)) throw DimensionError("rk4_flow: reference step must be positive");
    const std::size_t n = q0.size();
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / h_ref));

    auto samples = std::make_shared<std::vector<Vec>>();
    samples->reserve(steps / store_stride + 2);
    samples->push_back(q0);

    Vec q = std::move(q0), v = std::move(qdot0);
    for (std::size_t k = 0; k < steps; ++k) {
        const Vec a1 = accel(q, v);
        const Vec q2 = q + (0.5 * h_ref) * v, v2 = v + (0.5 * h_ref) * a1;
        const Vec a2 = accel(q2, v2);
        const Vec q3 = q + (0.5 * h_ref) * v2, v3 = v + (0.5 * h_ref) * a2;
        const Vec a3 = accel(q3, v3);
        const Vec q4 = q + h_ref * v3, v4 = v + h_ref * a3;
        const Vec a4 = accel(q4, v4);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] += (h_ref / 6.0) * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += (h_ref / 6.0) * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        if ((k + 1) % store_stride == 0 || k + 1 == steps) samples->push_back(q);
    }

    const double dt = h_ref * static_cast<double>(store_stride);
    return {[samples, dt](double t) {
        if (t <= 0.0) return samples->front();
        const double u = t / dt;
        const std::size_t i = std::min(static_cast<std::size_t>(u), samples->size() - 1);
        if (i + 1 >= samples->size()) return samples->back();
        const double w = u - static_cast<double>(i);
        return (1.0 - w) * (*samples)[i] + w * (*samples)[i + 1];
    }};
}

/// Maximum absolute difference of one coordinate between a discrete
/// trajectory and a continuous reference sampled at the step times.
inline double max_error(const Trajectory& traj, const ContinuousTrajectory& ref,
                        std::size_t coordinate_index) {
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.points.size(); ++k) {
        const Vec r = ref(static_cast<double>(k) * traj.h);
        worst = std::max(worst, std::abs(traj.points[k][coordinate_index] - r[coordinate_index]));
    }
    return worst;
}

} // namespace dsocs
