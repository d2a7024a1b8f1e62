#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dsocs/errors.hpp"
#include "dsocs/linalg.hpp"

namespace dsocs {

struct SolveConfig {
    double tolerance = 1e-12;  // residual infinity-norm
    int max_iterations = 50;
    double fd_epsilon = 1e-7;  // finite-difference step for Jacobians
};

struct NewtonResult {
    Vec x;
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Damped Newton iteration with central-difference Jacobians. The step is
/// halved (up to 20 times) while the residual norm fails to decrease; the
/// best trial point is kept either way so a flat stretch cannot wedge the
/// iteration in place.
inline NewtonResult newton_solve_full(const VecFn& residual, Vec guess, const SolveConfig& cfg) {
    Vec x = std::move(guess);
    Vec r = residual(x);
    if (r.size() != x.size())
        throw DimensionError("newton_solve: residual dimension does not match guess");
    double rn = inf_norm(r);
    if (rn <= cfg.tolerance) return {x, 0, rn};

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        const Mat jac = fd_jacobian(residual, x, cfg.fd_epsilon);
        const Vec dx = linear_solve(jac, -r);

        double alpha = 1.0;
        Vec best_x = x + dx;
        Vec best_r = residual(best_x);
        double best_rn = inf_norm(best_r);
        for (int halving = 0; halving < 20 && best_rn >= rn; ++halving) {
            alpha *= 0.5;
            Vec trial_x = x + alpha * dx;
            Vec trial_r = residual(trial_x);
            const double trial_rn = inf_norm(trial_r);
            if (trial_rn < best_rn) {
                best_x = std::move(trial_x);
                best_r = std::move(trial_r);
                best_rn = trial_rn;
            }
        }
        x = std::move(best_x);
        r = std::move(best_r);
        rn = best_rn;
        if (rn <= cfg.tolerance) return {x, it, rn};
    }
    throw NoConvergenceError("newton_solve: no convergence after " +
                             std::to_string(cfg.max_iterations) +
                             " iterations (residual " + std::to_string(rn) + ")");
}

inline Vec newton_solve(const VecFn& residual, const Vec& guess, const SolveConfig& cfg) {
    return newton_solve_full(residual, guess, cfg).x;
}

namespace detail {

inline double bisect(const std::function<double(double)>& f, double a, double b, double fa,
                     double width) {
    for (int i = 0; i < 200 && (b - a) > width; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Scans f on a uniform grid over [lo, hi], bisects every sign-change
/// bracket down to 1e-13 width and returns the sorted roots with
/// near-duplicates (closer than 1e-10) merged. Only simple roots are
/// found; tangential roots never produce a sign change.
inline std::vector<double> enumerate_scalar_roots(const std::function<double(double)>& f,
                                                  double lo, double hi, int grid_points) {
    if (!(lo < hi)) throw DimensionError("enumerate_scalar_roots: need lo < hi");
    if (grid_points < 2) throw DimensionError("enumerate_scalar_roots: need >= 2 grid points");

    const double dx = (hi - lo) / (grid_points - 1);
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = f(lo);
    for (int i = 1; i < grid_points; ++i) {
        const double x = (i == grid_points - 1) ? hi : lo + i * dx;
        const double fx = f(x);
        if (f_prev == 0.0) {
            roots.push_back(x_prev);
        } else if (fx != 0.0 && (f_prev < 0.0) != (fx < 0.0)) {
            roots.push_back(detail::bisect(f, x_prev, x, f_prev, 1e-13));
        }
        x_prev = x;
        f_prev = fx;
    }
    if (f_prev == 0.0) roots.push_back(x_prev);

    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > 1e-10)
            merged.push_back(r);
    }
    return merged;
}

} // namespace dsocs
