#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsocs/errors.hpp"
#include "dsocs/fit.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/reference.hpp"
#include "dsocs/stepping.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

/// Coefficient matrix of the discrete Lagrangian two-form at (q, q') in the
/// coordinates (dq, dq'): built from the mixed second-derivative block
/// M_ij = d^2 L_d / dq_i dq'_j as
///   [ 0   -M ]
///   [ M^T  0 ],
/// the diagonal blocks vanishing because the wedge of a symmetric Hessian
/// is zero. With this sign the free-particle flow Jacobian satisfies
/// J^T Omega J = Omega.
inline Mat omega_Ld(const DiscreteSystem& sys, const Vec& q, const Vec& q_next,
                    double fd_eps = 1e-6) {
    const std::size_t n = sys.dim;
    // Mixed block by differencing D2 L_d (analytic when available) in q.
    Mat mixed(n, n);
    Vec qp = q, qm = q;
    for (std::size_t i = 0; i < n; ++i) {
        qp[i] = q[i] + fd_eps;
        qm[i] = q[i] - fd_eps;
        const Vec dp = detail::d2_lagrangian(sys, qp, q_next, fd_eps);
        const Vec dm = detail::d2_lagrangian(sys, qm, q_next, fd_eps);
        for (std::size_t j = 0; j < n; ++j) mixed(i, j) = (dp[j] - dm[j]) / (2.0 * fd_eps);
        qp[i] = q[i];
        qm[i] = q[i];
    }
    Mat omega(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            omega(i, n + j) = -mixed(i, j);
            omega(n + j, i) = mixed(i, j);
        }
    return omega;
}

/// The one-form xi at (q0, q1) evaluated on (dq0, dq1): the momentum defect
/// of the solved triple paired with dq1. It measures how far the flow is
/// from being symplectic; it vanishes on variations inside the variational
/// subspace.
inline double xi_form(const DiscreteSystem& sys, const ConfigPair& state,
                      const StepperConfig& cfg, const Vec& /*dq0*/, const Vec& dq1) {
    const StepResult r = step(sys, state, cfg);
    const Vec defect =
        momentum_defect(sys, state.q_prev, state.q_curr, r.q_next, cfg.solve.fd_epsilon);
    return dot(defect, dq1);
}

namespace detail {

/// Flow map (q0, q1) -> (q1, q2) on flattened coordinates.
inline Vec flow_map(const DiscreteSystem& sys, const Vec& z, const StepperConfig& cfg) {
    const std::size_t n = sys.dim;
    Vec q0(z.begin(), z.begin() + n), q1(z.begin() + n, z.end());
    const StepResult r = step(sys, {q0, q1}, cfg);
    Vec out(q1);
    out.insert(out.end(), r.q_next.begin(), r.q_next.end());
    return out;
}

/// Momentum defect of the solved triple as a function of the flattened
/// state; these are the dq1-coefficients of xi.
inline Vec xi_coefficients(const DiscreteSystem& sys, const Vec& z, const StepperConfig& cfg) {
    const std::size_t n = sys.dim;
    Vec q0(z.begin(), z.begin() + n), q1(z.begin() + n, z.end());
    const StepResult r = step(sys, {q0, q1}, cfg);
    return momentum_defect(sys, q0, q1, r.q_next, cfg.solve.fd_epsilon);
}

} // namespace detail

/// Coefficient matrix of d(xi) at the state, by central differences of the
/// xi coefficients over the 2n coordinate directions.
inline Mat dxi_matrix(const DiscreteSystem& sys, const ConfigPair& state, const StepperConfig& cfg,
                      double eps) {
    const std::size_t n = sys.dim;
    Vec z(state.q_prev);
    z.insert(z.end(), state.q_curr.begin(), state.q_curr.end());

    // Rows of grad: partials of each xi coefficient along each direction.
    Mat grad(2 * n, 2 * n);  // grad(alpha, i) = d c_i / d z_alpha  (c lives on dq1 slots)
    Vec zp = z, zm = z;
    for (std::size_t alpha = 0; alpha < 2 * n; ++alpha) {
        zp[alpha] = z[alpha] + eps;
        zm[alpha] = z[alpha] - eps;
        const Vec cp = detail::xi_coefficients(sys, zp, cfg);
        const Vec cm = detail::xi_coefficients(sys, zm, cfg);
        for (std::size_t i = 0; i < n; ++i)
            grad(alpha, n + i) = (cp[i] - cm[i]) / (2.0 * eps);
        zp[alpha] = z[alpha];
        zm[alpha] = z[alpha];
    }

    Mat d(2 * n, 2 * n);
    for (std::size_t a = 0; a < 2 * n; ++a)
        for (std::size_t b = 0; b < 2 * n; ++b) d(a, b) = grad(a, b) - grad(b, a);
    return d;
}

struct SymplecticReport {
    double residual = 0.0;       // |J^T Omega' J - Omega - dxi| / |Omega|
    double dxi_norm = 0.0;       // |dxi| / |Omega|
    double residual_no_dxi = 0.0;  // |J^T Omega' J - Omega| / |Omega|
};

/// Verifies the one-step evolution identity of the discrete two-form,
///   (flow)^* Omega' = Omega + d(xi),
/// by finite differences. An optional column basis restricts the check to a
/// subspace of directions (e.g. the tangent of a holonomic leaf).
inline SymplecticReport symplectic_evolution_report(const DiscreteSystem& sys,
                                                    const ConfigPair& state,
                                                    const StepperConfig& cfg,
                                                    const std::optional<Mat>& directions = {}) {
    const std::size_t n = sys.dim;
    Vec z(state.q_prev);
    z.insert(z.end(), state.q_curr.begin(), state.q_curr.end());
    const double eps = 1e-5 * (1.0 + inf_norm(z));

    const Vec image = detail::flow_map(sys, z, cfg);
    const Mat jac = fd_jacobian([&](const Vec& y) { return detail::flow_map(sys, y, cfg); }, z, eps);

    const Mat omega_here = omega_Ld(sys, state.q_prev, state.q_curr);
    const Mat omega_next =
        omega_Ld(sys, Vec(image.begin(), image.begin() + n), Vec(image.begin() + n, image.end()));
    const Mat pulled = matmul(jac.transposed(), matmul(omega_next, jac));
    const Mat dxi = dxi_matrix(sys, state, cfg, eps);

    const auto project = [&](const Mat& a) {
        if (!directions) return a;
        return matmul(directions->transposed(), matmul(a, *directions));
    };
    const Mat p_pulled = project(pulled);
    const Mat p_here = project(omega_here);
    const Mat p_dxi = project(dxi);

    const double scale = inf_norm(p_here);
    if (scale == 0.0) throw DimensionError("symplectic check: restricted two-form vanishes");

    SymplecticReport report;
    double r_full = 0.0, r_plain = 0.0;
    for (std::size_t i = 0; i < p_here.rows(); ++i)
        for (std::size_t j = 0; j < p_here.cols(); ++j) {
            r_full = std::max(r_full,
                              std::abs(p_pulled(i, j) - p_here(i, j) - p_dxi(i, j)));
            r_plain = std::max(r_plain, std::abs(p_pulled(i, j) - p_here(i, j)));
        }
    report.residual = r_full / scale;
    report.residual_no_dxi = r_plain / scale;
    report.dxi_norm = inf_norm(p_dxi) / scale;
    return report;
}

inline double check_symplectic_evolution(const DiscreteSystem& sys, const ConfigPair& state,
                                         const StepperConfig& cfg) {
    return symplectic_evolution_report(sys, state, cfg).residual;
}

/// Rank data for the local-flow existence conditions at a trajectory
/// triple: the force balance must depend injectively on the outer points
/// along constraint-tangent directions.
struct RankRecord {
    Vec point;                 // q1 of the triple
    std::size_t dk_tangent_dim = 0;
    std::size_t d3_domain_dim = 0;  // third-slot directions tangent to the constraint
    std::size_t d3_rank = 0;
    double d3_sigma_min = 0.0;
    std::size_t d1_domain_dim = 0;
    std::size_t d1_rank = 0;
    double d1_sigma_min = 0.0;

    bool full() const { return d3_rank == d3_domain_dim && d1_rank == d1_domain_dim; }
};

namespace detail {

/// Directional derivative of beta along direction dir applied to slot
/// `slot` of the triple.
inline Vec beta_slot_derivative(const DiscreteSystem& sys, const Vec& q0, const Vec& q1,
                                const Vec& q2, int slot, const Vec& dir, double eps) {
    Vec a0 = q0, a1 = q1, a2 = q2, b0 = q0, b1 = q1, b2 = q2;
    Vec& ap = slot == 0 ? a0 : (slot == 1 ? a1 : a2);
    Vec& bp = slot == 0 ? b0 : (slot == 1 ? b1 : b2);
    ap = ap + eps * dir;
    bp = bp - eps * dir;
    const Vec fp = beta_residual(sys, a0, a1, a2);
    const Vec fm = beta_residual(sys, b0, b1, b2);
    return (1.0 / (2.0 * eps)) * (fp - fm);
}

} // namespace detail

inline RankRecord check_flow_conditions(const DiscreteSystem& sys, const Vec& q0, const Vec& q1,
                                        const Vec& q2, double fd_eps = 1e-7) {
    if (inf_norm(step_residual(sys, q0, q1, q2, fd_eps)) > 1e-8)
        throw NotOnConstraintError("check_flow_conditions: triple is not a trajectory triple");

    const std::size_t n = sys.dim;
    RankRecord rec;
    rec.point = q1;

    // Jacobian of the full constraint-set residual over the 3n coordinates.
    Vec z(q0);
    z.insert(z.end(), q1.begin(), q1.end());
    z.insert(z.end(), q2.begin(), q2.end());
    const VecFn dk = [&](const Vec& y) {
        return constraint_set_residual(sys, Vec(y.begin(), y.begin() + n),
                                       Vec(y.begin() + n, y.begin() + 2 * n),
                                       Vec(y.begin() + 2 * n, y.end()));
    };
    const Vec probe = dk(z);
    Mat jac;  // empty for unconstrained systems
    if (!probe.empty()) jac = fd_jacobian(dk, z, fd_eps);
    rec.dk_tangent_dim =
        probe.empty() ? 3 * n : null_space_basis(jac).cols();

    const auto slot_analysis = [&](int slot, std::size_t& domain_dim, std::size_t& rank,
                                   double& sigma_min) {
        // Directions living purely in the given slot that are tangent to
        // the constraint set.
        Mat slot_dirs;  // columns: slot-space vectors whose lift is tangent
        if (probe.empty()) {
            slot_dirs = Mat::identity(n);
        } else {
            Mat restricted(jac.rows(), n);
            for (std::size_t r = 0; r < jac.rows(); ++r)
                for (std::size_t i = 0; i < n; ++i) restricted(r, i) = jac(r, slot * n + i);
            slot_dirs = null_space_basis(restricted);
        }
        domain_dim = slot_dirs.cols();
        if (domain_dim == 0) {
            rank = 0;
            sigma_min = 0.0;
            return;
        }
        Mat dbeta(sys.n_basis, domain_dim);
        for (std::size_t c = 0; c < domain_dim; ++c) {
            const Vec col =
                detail::beta_slot_derivative(sys, q0, q1, q2, slot, slot_dirs.col(c), fd_eps);
            for (std::size_t r = 0; r < sys.n_basis; ++r) dbeta(r, c) = col[r];
        }
        const Vec sigma = singular_values(dbeta);
        const double smax = sigma.empty() ? 0.0 : sigma[0];
        rank = 0;
        sigma_min = 0.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(domain_dim, sigma.size()); ++i)
            if (sigma[i] > 1e-9 * smax && sigma[i] > 0.0) {
                ++rank;
                sigma_min = sigma[i];
            }
    };

    slot_analysis(2, rec.d3_domain_dim, rec.d3_rank, rec.d3_sigma_min);
    slot_analysis(0, rec.d1_domain_dim, rec.d1_rank, rec.d1_sigma_min);
    return rec;
}

/// Discrete Lagrangian along each step of a trajectory; constant for the
/// energy-preserving systems.
inline std::vector<double> energy_series(const DiscreteSystem& sys, const Trajectory& traj) {
    std::vector<double> e;
    if (traj.points.size() < 2) return e;
    e.reserve(traj.points.size() - 1);
    for (std::size_t k = 0; k + 1 < traj.points.size(); ++k)
        e.push_back(sys.lagrangian(traj.points[k], traj.points[k + 1]));
    return e;
}

/// V sampled along a trajectory with central-difference velocity
/// reconstruction; entry k corresponds to interior point k = 1 .. N-1.
inline std::vector<double> lyapunov_series(const std::function<double(const Vec&, const Vec&)>& V,
                                           const Trajectory& traj) {
    std::vector<double> values;
    if (traj.points.size() < 3) return values;
    values.reserve(traj.points.size() - 2);
    for (std::size_t k = 1; k + 1 < traj.points.size(); ++k) {
        const Vec v = (0.5 / traj.h) * (traj.points[k + 1] - traj.points[k - 1]);
        values.push_back(V(traj.points[k], v));
    }
    return values;
}

struct ConvergenceStudy {
    std::vector<std::pair<double, double>> pairs;  // (h, max error)
    double slope = 0.0;
    std::vector<std::string> failures;
};

/// Runs the integrator for each step size, measures the maximum coordinate
/// error against the reference and fits the log-log slope. Per-h failures
/// are recorded and the study continues with the remaining step sizes.
inline ConvergenceStudy convergence_study(
    const std::function<DiscreteSystem(double)>& build, const ContinuousTrajectory& ref,
    const std::function<ConfigPair(double)>& seed, const std::vector<double>& h_list,
    double t_end, std::size_t coordinate_index, const StepperConfig& cfg) {
    ConvergenceStudy study;
    for (double h : h_list) {
        try {
            const DiscreteSystem sys = build(h);
            const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
            const Trajectory traj = flow(sys, seed(h), steps, cfg);
            study.pairs.emplace_back(h, max_error(traj, ref, coordinate_index));
        } catch (const Error& e) {
            study.failures.push_back("h=" + std::to_string(h) + ": " + e.what());
        }
    }
    study.slope = loglog_slope(study.pairs);
    return study;
}

/// Summary emitted by the diagnose command.
struct DiagnosticsReport {
    double antisymmetry_residual = 0.0;
    double symplectic_residual = 0.0;
    double xi_residual = 0.0;  // size of the d(xi) correction term
    std::vector<RankRecord> rank_records;
    std::vector<double> energy;
    std::vector<double> lyapunov;
    std::vector<int> candidate_counts;

    bool ranks_full() const {
        for (const auto& r : rank_records)
            if (!r.full()) return false;
        return true;
    }
};

} // namespace dsocs
