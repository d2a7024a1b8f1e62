#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsocs/continuous.hpp"
#include "dsocs/errors.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/roots.hpp"
#include "dsocs/stepping.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// Inertia wheel pendulum, composite parameters. I and J are the effective
/// inertias of the pendulum body and the wheel, M is the gravity torque
/// coefficient (M-tilde times g). The remaining constants shape the
/// candidate Lyapunov function V and the dissipation rate F that define the
/// stabilizing constraint dV/dt = -F.
struct PendulumParams {
    double I = 312.5;
    double J = 2.0772;
    double M = 37.98;
    double d = 1.0;
    double e = 1000.0;
    double chi = 100.0;
    int n = -154;
    double rho = 2.0;
    double h = 0.1;

    double a() const { return 1.0 / I; }
    double b() const { return -1.0 / I; }
    double c() const { return 1.0 / I + 1.0 / J; }
    double h_c() const { return d * (n * b() - c()) / (a() * c() - b() * b()); }
    double g_c() const { return d * (n * a() - b()) / (a() * c() - b() * b()); }
    double f() const { return (g_c() * g_c() + e) / h_c(); }

    void validate() const {
        if (!(I > 0 && J > 0 && M > 0 && d > 0 && e > 0 && chi > 0 && rho > 0))
            throw DimensionError("pendulum: I, J, M, d, e, chi, rho must be positive");
        if (!(n * b() > c()))
            throw DimensionError("pendulum: n must satisfy n*b > c (large negative n)");
        if (!(h_c() > 0)) throw DimensionError("pendulum: derived h_c must be positive");
        if (h == 0.0) throw DimensionError("pendulum: time step must be nonzero");
    }
};

namespace pend {

// p and s are the two momentum-like velocity combinations V is built from.
inline double p_of(const PendulumParams& pp, const Vec& qdot) {
    return (pp.I + pp.J) * qdot[0] + pp.J * qdot[1];
}
inline double s_of(const Vec& qdot) { return qdot[0] + qdot[1]; }
inline double w_of(const PendulumParams& pp, const Vec& qdot) {
    return pp.g_c() * p_of(pp, qdot) + pp.h_c() * pp.J * s_of(qdot);
}

inline double V(const PendulumParams& pp, const Vec& q, const Vec& qdot) {
    const double p = p_of(pp, qdot);
    const double s = s_of(qdot);
    const double u = q[1] - pp.n * q[0];
    return 0.5 * pp.f() * p * p + 0.5 * pp.h_c() * pp.J * pp.J * s * s +
           pp.g_c() * pp.J * p * s + pp.chi * (1.0 - std::cos(u)) +
           (pp.M * pp.e / pp.d) * (1.0 - std::cos(q[0]));
}

inline double F(const PendulumParams& pp, const Vec& qdot) {
    const double w = w_of(pp, qdot);
    return pp.rho * std::tanh(w) * w;
}

inline Vec V_grad_q(const PendulumParams& pp, const Vec& q) {
    const double u = q[1] - pp.n * q[0];
    return {-pp.n * pp.chi * std::sin(u) + (pp.M * pp.e / pp.d) * std::sin(q[0]),
            pp.chi * std::sin(u)};
}

inline Vec V_grad_qdot(const PendulumParams& pp, const Vec& qdot) {
    const double p = p_of(pp, qdot);
    const double s = s_of(qdot);
    const double IJ = pp.I + pp.J;
    return {pp.f() * p * IJ + pp.h_c() * pp.J * pp.J * s + pp.g_c() * pp.J * (IJ * s + p),
            pp.f() * p * pp.J + pp.h_c() * pp.J * pp.J * s + pp.g_c() * pp.J * (pp.J * s + p)};
}

/// dV/dt + F evaluated at (q, qdot, qddot); the Lyapunov constraint is the
/// zero set of this expression.
inline double lyapunov_constraint(const PendulumParams& pp, const Vec& q, const Vec& qdot,
                                  const Vec& qddot) {
    const Vec gq = V_grad_q(pp, q);
    const Vec gv = V_grad_qdot(pp, qdot);
    return gq[0] * qdot[0] + gq[1] * qdot[1] + gv[0] * qddot[0] + gv[1] * qddot[1] +
           F(pp, qdot);
}

/// Leading (quadratic) coefficient of the reduced scalar step equation in
/// theta_2; used to normalize the discrete residual so that solver
/// tolerances are meaningful in absolute terms.
inline double reduced_quadratic_coefficient(const PendulumParams& pp) {
    return -pp.d * pp.I * pp.I * (pp.I + (pp.n + 1) * pp.J) / (2.0 * pp.h * pp.h * pp.h);
}

} // namespace pend

/// The (V, F) pair as plain functions of the state.
struct LyapunovPair {
    std::function<double(const Vec&, const Vec&)> V;
    std::function<double(const Vec&, const Vec&)> F;
};

inline LyapunovPair make_lyapunov(const PendulumParams& params) {
    params.validate();
    return {[params](const Vec& q, const Vec& qdot) { return pend::V(params, q, qdot); },
            [params](const Vec&, const Vec& qdot) { return pend::F(params, qdot); }};
}

inline DiscreteSystem make_pendulum(const PendulumParams& params) {
    params.validate();
    const double h = params.h;
    const double I = params.I;
    const double J = params.J;
    const double M = params.M;
    // Residual normalization; without it the step equations live at the
    // scale of I^2/h^3 and a 1e-12 tolerance is unreachable in doubles.
    const double kin_scale = std::abs(pend::reduced_quadratic_coefficient(params));
    const double basis_scale = h * h / (I + J);

    DiscreteSystem sys;
    sys.dim = 2;
    sys.h = h;
    sys.name = "pendulum";
    sys.coordinate_names = {"theta", "psi"};
    sys.n_kin = 1;
    sys.n_basis = 1;

    // L_d(q0, q1) = h L(q0, (q1 - q0)/h) with
    // L = 1/2 I thdot^2 + 1/2 J (thdot + psidot)^2 - M (1 + cos theta).
    sys.lagrangian = [I, J, M, h](const Vec& q0, const Vec& q1) {
        const double vt = (q1[0] - q0[0]) / h;
        const double vp = (q1[1] - q0[1]) / h;
        return h * (0.5 * I * vt * vt + 0.5 * J * (vt + vp) * (vt + vp) -
                    M * (1.0 + std::cos(q0[0])));
    };
    sys.d1_lagrangian = [I, J, M, h](const Vec& q0, const Vec& q1) {
        const double vt = (q1[0] - q0[0]) / h;
        const double vp = (q1[1] - q0[1]) / h;
        return Vec{-I * vt - J * (vt + vp) + h * M * std::sin(q0[0]), -J * (vt + vp)};
    };
    sys.d2_lagrangian = [I, J, h](const Vec& q0, const Vec& q1) {
        const double vt = (q1[0] - q0[0]) / h;
        const double vp = (q1[1] - q0[1]) / h;
        return Vec{I * vt + J * (vt + vp), J * (vt + vp)};
    };

    sys.kinematic_residual = [params, h, kin_scale](const Vec& q0, const Vec& q1, const Vec& q2) {
        const Vec v = (0.5 / h) * (q2 - q0);
        const Vec a = (1.0 / (h * h)) * (q2 - 2.0 * q1 + q0);
        return Vec{pend::lyapunov_constraint(params, q1, v, a) / kin_scale};
    };

    // Variations along d/dtheta; the column is shrunk so the force balance
    // is O(1) in the solver.
    sys.variational_basis = [basis_scale](const Vec&, const Vec&, const Vec&) {
        Mat basis(2, 1);
        basis(0, 0) = basis_scale;
        basis(1, 0) = 0.0;
        return basis;
    };

    sys.lyapunov = [params](const Vec& q, const Vec& qdot) { return pend::V(params, q, qdot); };

    // One-step solver by scalar reduction: the force balance determines
    // psi_2 as an affine function of theta_2; substituting it into the
    // kinematic residual leaves one equation in theta_2 whose roots are
    // enumerated over a window around theta_1.
    sys.custom_step = [params, h, I, J, M](const DiscreteSystem& self, const Vec& q0,
                                           const Vec& q1, const StepperConfig& cfg) {
        const double th0 = q0[0], ps0 = q0[1];
        const double th1 = q1[0], ps1 = q1[1];
        const double slope = (I + J) / J;
        const double alpha =
            2.0 * ps1 - ps0 + (h * h * M * std::sin(th1) + (I + J) * (2.0 * th1 - th0)) / J;
        const auto psi2_of = [alpha, slope](double th2) { return alpha - slope * th2; };
        const auto g = [&](double th2) {
            return self.kinematic_residual(q0, q1, Vec{th2, psi2_of(th2)})[0];
        };

        const double lo = th1 + cfg.scan_lo;
        const double hi = th1 + cfg.scan_hi;
        std::vector<double> roots = enumerate_scalar_roots(g, lo, hi, cfg.scan_points);

        if (roots.empty()) {
            // A root pair can merge into a dip narrower than the grid;
            // locate the extremum nearest to a crossing and re-bracket.
            const int np = cfg.scan_points;
            const double dx = (hi - lo) / (np - 1);
            double x_best = lo;
            double sgn = 0.0;
            {
                double f_best = std::abs(g(lo));
                for (int i = 1; i < np; ++i) {
                    const double x = lo + i * dx;
                    const double fx = g(x);
                    if (i == 1) sgn = fx < 0 ? -1.0 : 1.0;
                    if (std::abs(fx) < f_best) {
                        f_best = std::abs(fx);
                        x_best = x;
                    }
                }
            }
            double a = std::max(lo, x_best - dx), b = std::min(hi, x_best + dx);
            for (int i = 0; i < 200 && (b - a) > 1e-14; ++i) {
                const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                if (sgn * g(m1) < sgn * g(m2))
                    b = m2;
                else
                    a = m1;
            }
            const double x_min = 0.5 * (a + b);
            if (sgn * g(x_min) < 0.0) {
                const double left = std::max(lo, x_best - dx);
                const double right = std::min(hi, x_best + dx);
                roots = enumerate_scalar_roots(g, left, x_min, 3);
                for (double r : enumerate_scalar_roots(g, x_min, right, 3)) roots.push_back(r);
                std::sort(roots.begin(), roots.end());
            }
        }
        if (roots.empty())
            throw NoRootFoundError("pendulum: no admissible theta_2 in the scan window");

        const auto lyap_delta = std::optional<std::function<double(double)>>(
            [&](double th2) {
                const Vec q2{th2, psi2_of(th2)};
                const Vec v = (0.5 / h) * (q2 - q0);
                return pend::V(params, q1, v);
            });

        StepResult result;
        result.record.candidate_count = static_cast<int>(roots.size());
        const double th2 =
            select_root(roots, th1, lyap_delta, cfg, &result.record.selected_root_note);
        result.q_next = Vec{th2, psi2_of(th2)};
        return result;
    };

    return sys;
}

/// Continuous form: the free pendulum Lagrangian plus the Lyapunov
/// constraint, with variations along d/dtheta.
inline ContinuousSystem make_pendulum_continuous(const PendulumParams& params) {
    params.validate();
    ContinuousSystem cont;
    cont.dim = 2;
    cont.name = "pendulum";
    cont.coordinate_names = {"theta", "psi"};
    cont.n_kin = 1;
    cont.n_basis = 1;

    const double I = params.I, J = params.J, M = params.M;
    cont.lagrangian = [I, J, M](const Vec& q, const Vec& qdot) {
        return 0.5 * I * qdot[0] * qdot[0] + 0.5 * J * (qdot[0] + qdot[1]) * (qdot[0] + qdot[1]) -
               M * (1.0 + std::cos(q[0]));
    };
    cont.kinematic_residual = [params](const Vec& q, const Vec& qdot, const Vec& qddot) {
        return Vec{pend::lyapunov_constraint(params, q, qdot, qddot)};
    };
    cont.variational_basis = [](const Vec&, const Vec&, const Vec&) {
        Mat basis(2, 1);
        basis(0, 0) = 1.0;
        basis(1, 0) = 0.0;
        return basis;
    };
    return cont;
}

} // namespace dsocs
