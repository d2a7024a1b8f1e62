#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsocs/errors.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/roots.hpp"

namespace dsocs {

/// How a stepper chooses among several admissible next points when the step
/// equations have more than one solution.
enum class RootSelection {
    NearestPrevious,   // closest to the previous coordinate; Lyapunov tie-break
    LyapunovDecrease,  // smallest Lyapunov value among candidates
    NewtonOnly,        // skip candidate enumeration, plain Newton from the predictor
};

struct StepperConfig {
    SolveConfig solve;
    // Scan window for scalar-reduction steppers, expressed as offsets from
    // the previous value of the reduced coordinate.
    double scan_lo = -2.0;
    double scan_hi = 2.0;
    int scan_points = 4001;
    RootSelection selection = RootSelection::NearestPrevious;
};

/// Per-step solver metadata kept alongside the trajectory.
struct StepRecord {
    int newton_iterations = 0;
    double residual_norm = 0.0;
    int candidate_count = 1;
    std::string selected_root_note;
};

struct StepResult {
    Vec q_next;
    StepRecord record;
};

/// The discrete state (q_{k-1}, q_k).
struct ConfigPair {
    Vec q_prev;
    Vec q_curr;
};

struct Trajectory {
    double h = 0.0;
    std::vector<Vec> points;         // q_0 ... q_N
    std::vector<StepRecord> step_records;  // one per computed step

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

/// A discrete second-order constrained Lagrangian system: a discrete
/// Lagrangian on Q x Q, kinematic constraints on triples of configurations
/// (as a residual whose zero set is the constraint), and a state-dependent
/// variational subspace (as a basis-valued map).
///
/// The step equations for the unknown q2 given (q0, q1) are
///   kinematic_residual(q0, q1, q2) = 0   (n_kin equations)
///   beta(q0, q1, q2) = 0                 (one equation per basis column),
/// so well-posedness requires n_kin + basis columns == dim.
///
/// `pair_residual`, when set, encodes an additional admissibility condition
/// on consecutive pairs (used by the first-order constraint builder, where
/// the constraint on (q0, q1) is inherited from the previous step rather
/// than solved again). Full membership of a triple in the kinematic
/// constraint set is then pair_residual(q0,q1) = 0 together with
/// kinematic_residual(q0,q1,q2) = 0.
struct DiscreteSystem {
    std::size_t dim = 0;
    double h = 0.0;  // time step; nonzero, negative for reverse stepping
    std::string name;
    std::vector<std::string> coordinate_names;

    std::function<double(const Vec&, const Vec&)> lagrangian;

    // Analytic first derivatives of the discrete Lagrangian; when absent,
    // central differences with SolveConfig::fd_epsilon are used.
    std::function<Vec(const Vec&, const Vec&)> d1_lagrangian;
    std::function<Vec(const Vec&, const Vec&)> d2_lagrangian;

    std::function<Vec(const Vec&, const Vec&, const Vec&)> kinematic_residual;
    std::function<Vec(const Vec&, const Vec&)> pair_residual;
    std::function<Mat(const Vec&, const Vec&, const Vec&)> variational_basis;

    std::size_t n_kin = 0;   // components of kinematic_residual
    std::size_t n_basis = 0; // columns of variational_basis

    // Specialized one-step solver (e.g. a scalar reduction that enumerates
    // candidate roots). The generic Newton stepper is used when absent or
    // when the stepper config selects NewtonOnly.
    std::function<StepResult(const DiscreteSystem&, const Vec&, const Vec&, const StepperConfig&)>
        custom_step;

    // Lyapunov-style monitor V(q, qdot) used for root selection and
    // reporting; optional.
    std::function<double(const Vec&, const Vec&)> lyapunov;

    bool well_posed() const { return n_kin + n_basis == dim; }

    void validate() const {
        if (dim == 0) throw DimensionError(name + ": system dimension must be positive");
        if (h == 0.0) throw DimensionError(name + ": time step must be nonzero");
        if (!lagrangian) throw DimensionError(name + ": missing discrete Lagrangian");
        if (!variational_basis) throw DimensionError(name + ": missing variational basis");
        if (!well_posed())
            throw DimensionError(name + ": n_kin + n_basis != dim; step system is not square");
    }
};

} // namespace dsocs
