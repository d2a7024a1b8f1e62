#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsocs/errors.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/system.hpp"

namespace dsocs {

namespace detail {

inline Vec d1_lagrangian(const DiscreteSystem& sys, const Vec& q, const Vec& q1, double eps) {
    if (sys.d1_lagrangian) return sys.d1_lagrangian(q, q1);
    return fd_gradient([&](const Vec& u) { return sys.lagrangian(u, q1); }, q, eps);
}

inline Vec d2_lagrangian(const DiscreteSystem& sys, const Vec& q0, const Vec& q, double eps) {
    if (sys.d2_lagrangian) return sys.d2_lagrangian(q0, q);
    return fd_gradient([&](const Vec& u) { return sys.lagrangian(q0, u); }, q, eps);
}

} // namespace detail

/// F-L_d(q, q') = (q, -D1 L_d(q, q')); returns the covector at q.
inline Vec legendre_minus(const DiscreteSystem& sys, const Vec& q, const Vec& q_next,
                          double fd_eps = 1e-7) {
    return -detail::d1_lagrangian(sys, q, q_next, fd_eps);
}

/// F+L_d(q, q') = (q', D2 L_d(q, q')); returns the covector at q'.
inline Vec legendre_plus(const DiscreteSystem& sys, const Vec& q, const Vec& q_next,
                         double fd_eps = 1e-7) {
    return detail::d2_lagrangian(sys, q, q_next, fd_eps);
}

/// The covector F+L_d(q0,q1) - F-L_d(q1,q2) = D2 L_d(q0,q1) + D1 L_d(q1,q2)
/// at q1, i.e. the discrete Euler-Lagrange momentum defect across the triple.
inline Vec momentum_defect(const DiscreteSystem& sys, const Vec& q0, const Vec& q1, const Vec& q2,
                           double fd_eps = 1e-7) {
    return detail::d2_lagrangian(sys, q0, q1, fd_eps) + detail::d1_lagrangian(sys, q1, q2, fd_eps);
}

/// Pairing of the momentum defect with each variational basis column. Along
/// trajectories this force balance vanishes.
inline Vec beta_residual(const DiscreteSystem& sys, const Vec& q0, const Vec& q1, const Vec& q2,
                         double fd_eps = 1e-7) {
    const Mat basis = sys.variational_basis(q0, q1, q2);
    if (basis.rows() != sys.dim)
        throw DimensionError(sys.name + ": variational basis has wrong row count");
    const Vec defect = momentum_defect(sys, q0, q1, q2, fd_eps);
    Vec beta(basis.cols(), 0.0);
    for (std::size_t j = 0; j < basis.cols(); ++j)
        for (std::size_t i = 0; i < basis.rows(); ++i) beta[j] += defect[i] * basis(i, j);
    return beta;
}

/// The square per-step system in the unknown q2: kinematic residual stacked
/// on the force balance.
inline Vec step_residual(const DiscreteSystem& sys, const Vec& q0, const Vec& q1, const Vec& q2,
                         double fd_eps = 1e-7) {
    Vec r = sys.kinematic_residual ? sys.kinematic_residual(q0, q1, q2) : Vec{};
    const Vec beta = beta_residual(sys, q0, q1, q2, fd_eps);
    r.insert(r.end(), beta.begin(), beta.end());
    return r;
}

/// Residual whose zero set is the full discrete kinematic constraint on
/// triples. Differs from the per-step kinematic residual only for systems
/// built from first-order constraints, where admissibility of (q0, q1) is
/// part of the constraint set but not of the step equations.
inline Vec constraint_set_residual(const DiscreteSystem& sys, const Vec& q0, const Vec& q1,
                                   const Vec& q2) {
    Vec r = sys.pair_residual ? sys.pair_residual(q0, q1) : Vec{};
    if (sys.kinematic_residual) {
        const Vec k = sys.kinematic_residual(q0, q1, q2);
        r.insert(r.end(), k.begin(), k.end());
    }
    return r;
}

/// Picks one candidate root. NearestPrevious takes the candidate closest to
/// `previous`; when the two best candidates lie within 1e-6 of each other
/// the Lyapunov criterion breaks the tie (or an AmbiguousRootError is
/// raised if none is available).
inline double select_root(const std::vector<double>& candidates, double previous,
                          const std::optional<std::function<double(double)>>& lyapunov_delta,
                          const StepperConfig& cfg, std::string* note = nullptr) {
    if (candidates.empty()) throw NoRootFoundError("select_root: empty candidate list");
    if (candidates.size() == 1) {
        if (note) *note = "single candidate";
        return candidates.front();
    }

    if (cfg.selection == RootSelection::LyapunovDecrease) {
        if (!lyapunov_delta)
            throw AmbiguousRootError("select_root: LyapunovDecrease needs a Lyapunov map");
        double best = candidates.front();
        double best_delta = (*lyapunov_delta)(best);
        bool tie = false;
        for (std::size_t i = 1; i < candidates.size(); ++i) {
            const double d = (*lyapunov_delta)(candidates[i]);
            if (d < best_delta) {
                best = candidates[i];
                best_delta = d;
                tie = false;
            } else if (d == best_delta) {
                tie = true;
            }
        }
        if (tie) throw AmbiguousRootError("select_root: Lyapunov values tie exactly");
        if (note) *note = "lyapunov decrease";
        return best;
    }

    // NearestPrevious (also the fallback for NewtonOnly if ever called).
    std::vector<double> sorted = candidates;
    std::sort(sorted.begin(), sorted.end(), [&](double a, double b) {
        return std::abs(a - previous) < std::abs(b - previous);
    });
    const double best = sorted[0];
    const double second = sorted[1];
    if (std::abs(best - second) >= 1e-6) {
        if (note) *note = "nearest previous";
        return best;
    }
    if (!lyapunov_delta)
        throw AmbiguousRootError("select_root: two candidates within 1e-6 and no Lyapunov map");
    const double db = (*lyapunov_delta)(best);
    const double ds = (*lyapunov_delta)(second);
    if (db == ds) throw AmbiguousRootError("select_root: near-tie persists under Lyapunov values");
    if (note) *note = "near-tie resolved by lyapunov decrease";
    return db < ds ? best : second;
}

/// Advances (q_prev, q_curr) one step. Uses the system's specialized stepper
/// when present (unless NewtonOnly is selected); otherwise solves the square
/// step system by Newton from the constant-velocity predictor 2 q1 - q0.
inline StepResult step(const DiscreteSystem& sys, const ConfigPair& state,
                       const StepperConfig& cfg) {
    sys.validate();
    if (state.q_prev.size() != sys.dim || state.q_curr.size() != sys.dim)
        throw DimensionError(sys.name + ": state dimension mismatch");

    if (sys.custom_step && cfg.selection != RootSelection::NewtonOnly) {
        StepResult result = sys.custom_step(sys, state.q_prev, state.q_curr, cfg);
        const double check =
            inf_norm(step_residual(sys, state.q_prev, state.q_curr, result.q_next,
                                   cfg.solve.fd_epsilon));
        if (check > cfg.solve.tolerance)
            throw NoConvergenceError(sys.name + ": specialized stepper left residual " +
                                     std::to_string(check));
        result.record.residual_norm = check;
        return result;
    }

    const Vec guess = 2.0 * state.q_curr - state.q_prev;
    const NewtonResult nr = newton_solve_full(
        [&](const Vec& q2) {
            return step_residual(sys, state.q_prev, state.q_curr, q2, cfg.solve.fd_epsilon);
        },
        guess, cfg.solve);
    StepResult result;
    result.q_next = nr.x;
    result.record.newton_iterations = nr.iterations;
    result.record.residual_norm = nr.residual_norm;
    result.record.candidate_count = 1;
    result.record.selected_root_note = "newton";
    return result;
}

/// Error payload carrying the part of the trajectory computed before the
/// failing step.
class FlowError : public Error {
public:
    FlowError(std::size_t failed_step, Trajectory partial, const std::string& cause)
        : Error("flow: step " + std::to_string(failed_step) + " failed: " + cause),
          failed_step_(failed_step),
          partial_(std::move(partial)) {}

    std::size_t failed_step() const { return failed_step_; }
    const Trajectory& partial() const { return partial_; }

private:
    std::size_t failed_step_;
    Trajectory partial_;
};

/// Iterates the one-step map. Each accepted triple is re-checked against the
/// step residual independently of the solver's own accounting, and systems
/// with a pair-admissibility condition get their seed checked up front
/// (an inadmissible seed cannot be repaired by the step equations).
inline Trajectory flow(const DiscreteSystem& sys, const ConfigPair& seed, std::size_t steps,
                       const StepperConfig& cfg) {
    if (steps < 1) throw DimensionError("flow: need at least one step");
    Trajectory traj;
    traj.h = sys.h;
    traj.points.reserve(steps + 2);
    traj.points.push_back(seed.q_prev);
    traj.points.push_back(seed.q_curr);
    traj.step_records.reserve(steps);

    if (sys.pair_residual &&
        inf_norm(sys.pair_residual(seed.q_prev, seed.q_curr)) > cfg.solve.tolerance)
        throw FlowError(1, std::move(traj),
                        sys.name + ": seed pair violates the first-order constraint");

    for (std::size_t k = 0; k < steps; ++k) {
        const Vec& q0 = traj.points[traj.points.size() - 2];
        const Vec& q1 = traj.points[traj.points.size() - 1];
        try {
            StepResult r = step(sys, {q0, q1}, cfg);
            if (!all_finite(r.q_next))
                throw NoConvergenceError(sys.name + ": non-finite step result");
            const double rn =
                inf_norm(step_residual(sys, q0, q1, r.q_next, cfg.solve.fd_epsilon));
            if (rn > cfg.solve.tolerance)
                throw NoConvergenceError(sys.name + ": accepted step re-check failed");
            traj.points.push_back(std::move(r.q_next));
            traj.step_records.push_back(std::move(r.record));
        } catch (const Error& e) {
            throw FlowError(k + 1, std::move(traj), e.what());
        }
    }
    return traj;
}

/// Discrete seed from continuous initial data: (q, q + h qdot).
inline ConfigPair seed_from_continuous(const Vec& q, const Vec& qdot, double h) {
    if (q.size() != qdot.size())
        throw DimensionError("seed_from_continuous: q and qdot sizes differ");
    return {q, q + h * qdot};
}

} // namespace dsocs
