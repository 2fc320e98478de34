#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tikreg/matrix.hpp"
#include "tikreg/ocp.hpp"
#include "tikreg/spline.hpp"

namespace tikreg {

/// Control sampled on a uniform grid, evaluated through a not-a-knot cubic
/// spline between samples (grid hits return the stored samples exactly).
class ControlSignal {
public:
    ControlSignal(Vec grid, Vec values) : spline_(std::move(grid), std::move(values)) {
        const auto& g = spline_.knots();
        const double h = g[1] - g[0];
        for (std::size_t i = 1; i + 1 < g.size(); ++i)
            if (std::abs((g[i + 1] - g[i]) - h) > 1e-12 * h)
                throw dimension_error("ControlSignal: grid must be uniform");
    }

    double operator()(double t) const { return spline_(t); }

    const Vec& grid() const { return spline_.knots(); }
    const Vec& values() const { return spline_.values(); }
    const CubicSpline& spline() const { return spline_; }

private:
    CubicSpline spline_;
};

struct Trajectory {
    Vec grid;
    Vec x;
    Vec p;
};

namespace detail {

// Classical RK4 on xdot = p, pdot = u(t) - x. Initial data comes from the
// problem; tests may override it (energy-conservation check).
template <class Control>
Trajectory rk4_states(const Control& u, const ControlProblem& prob, std::size_t steps,
                      double x_init, double p_init) {
    if (steps < 16) throw dimension_error("integrate_states: steps >= 16");
    const double h = (prob.horizon - prob.t0) / static_cast<double>(steps);
    Trajectory traj;
    traj.grid.resize(steps + 1);
    traj.x.resize(steps + 1);
    traj.p.resize(steps + 1);
    double x = x_init, p = p_init;
    traj.grid[0] = prob.t0;
    traj.x[0] = x;
    traj.p[0] = p;
    auto ctrl = [&](double t) {
        const double v = u(t);
        if (!std::isfinite(v))
            throw numeric_error("integrate_states: non-finite control at t=" + std::to_string(t),
                                t);
        return v;
    };
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = prob.t0 + h * static_cast<double>(i);
        const double u0 = ctrl(t), um = ctrl(t + 0.5 * h), u1 = ctrl(t + h);

        const double k1x = p, k1p = u0 - x;
        const double k2x = p + 0.5 * h * k1p, k2p = um - (x + 0.5 * h * k1x);
        const double k3x = p + 0.5 * h * k2p, k3p = um - (x + 0.5 * h * k2x);
        const double k4x = p + h * k3p, k4p = u1 - (x + h * k3x);

        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        traj.grid[i + 1] = prob.t0 + h * static_cast<double>(i + 1);
        traj.x[i + 1] = x;
        traj.p[i + 1] = p;
    }
    traj.grid[steps] = prob.horizon; // exact right endpoint
    return traj;
}

} // namespace detail

inline constexpr std::size_t kDefaultIntegrateSteps = 2000;
inline constexpr std::size_t kDefaultQuadPoints = 1000;

inline Trajectory integrate_states(const ControlSignal& u, const ControlProblem& prob,
                                   std::size_t steps = kDefaultIntegrateSteps) {
    return detail::rk4_states(u, prob, steps, prob.x0, prob.p0);
}

/// MATLAB-gradient-style derivative: central differences inside, one-sided
/// first order at the ends.
inline Vec derivative_fd(const Vec& values, double dt) {
    const std::size_t n = values.size();
    if (n < 3) throw dimension_error("derivative_fd: need at least 3 samples");
    Vec g(n);
    g[0] = (values[1] - values[0]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    g[n - 1] = (values[n - 1] - values[n - 2]) / dt;
    return g;
}

inline double trapz(const Vec& y, double dt) {
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * dt;
}

/// Trapezoidal value of the regularized Lagrange objective
/// int (x + u^2/2 + eps/2 udot^2) dt along the simulated trajectory.
/// The state is integrated on its own grid and splined onto the quadrature
/// grid; udot comes from finite differences on the quadrature grid.
inline double evaluate_objective(const ControlSignal& u, const ControlProblem& prob,
                                 std::size_t quad_points = kDefaultQuadPoints,
                                 std::size_t integrate_steps = kDefaultIntegrateSteps) {
    if (quad_points < 64) throw dimension_error("evaluate_objective: quad_points >= 64");
    const Trajectory traj = integrate_states(u, prob, integrate_steps);
    const CubicSpline xs(traj.grid, traj.x);

    const std::size_t n = quad_points;
    const double dt = (prob.horizon - prob.t0) / static_cast<double>(n - 1);
    Vec uv(n), integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = prob.t0 + dt * static_cast<double>(i);
        uv[i] = u(t);
    }
    const Vec udot = derivative_fd(uv, dt);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = prob.t0 + dt * static_cast<double>(i);
        integrand[i] = xs(t) + 0.5 * uv[i] * uv[i] + 0.5 * prob.epsilon * udot[i] * udot[i];
    }
    return trapz(integrand, dt);
}

} // namespace tikreg
