#pragma once

#include <cmath>
#include <utility>

#include "tikreg/crab.hpp"
#include "tikreg/sim.hpp"

namespace tikreg {

/// Direct pointwise transcription: optimize the control values at uniform
/// time nodes with both endpoints pinned to zero, spline in between.
struct DirectConfig {
    int nodes = 15;
    long eval_budget = 36000; // NP * Nmax parity with the DE runs
    double step_init = 0.25;
    double tol = 1e-6;
    std::size_t quad_points = kDefaultQuadPoints;

    void validate() const {
        if (nodes < 4) throw dimension_error("DirectConfig: need nodes >= 4");
        if (eval_budget < 1) throw dimension_error("DirectConfig: need eval_budget >= 1");
        if (!(step_init > 0.0)) throw dimension_error("DirectConfig: need step_init > 0");
    }
};

/// Projected descent over the interior node values: forward-difference
/// gradient (1e-6 relative step) with backtracking line search, starting
/// from u00(t) = t(t - T). Endpoint elimination makes the equality
/// constraints exact. Deterministic; no RNG anywhere.
inline std::pair<OptimResult, ControlSignal> direct_solve(const ControlProblem& problem,
                                                          const DirectConfig& config) {
    config.validate();
    const int nn = config.nodes;
    const int m = nn - 2; // free interior values
    const double T = problem.horizon;
    Vec node_t(nn);
    for (int i = 0; i < nn; ++i)
        node_t[i] = problem.t0 + (T - problem.t0) * static_cast<double>(i) / (nn - 1);

    OptimResult res;
    auto objective = [&](const Vec& interior) {
        Vec vals(nn, 0.0);
        for (int i = 0; i < m; ++i) vals[i + 1] = interior[i];
        ++res.evaluations;
        return evaluate_objective(ControlSignal(node_t, vals), problem, config.quad_points);
    };

    Vec y(m);
    for (int i = 0; i < m; ++i) y[i] = node_t[i + 1] * (node_t[i + 1] - T);

    double fy = objective(y);
    res.history.push_back({fy, y});
    res.status = "budget";

    double step = config.step_init;
    while (res.evaluations < config.eval_budget) {
        // Forward-difference gradient.
        Vec g(m);
        double ginf = 0.0;
        for (int k = 0; k < m; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(y[k]));
            Vec yk = y;
            yk[k] += h;
            g[k] = (objective(yk) - fy) / h;
            ginf = std::max(ginf, std::abs(g[k]));
            if (res.evaluations >= config.eval_budget) break;
        }
        if (ginf <= config.tol) {
            res.status = "converged";
            break;
        }
        // Backtracking from the (growing) trial step; only improvements are
        // ever accepted, so the trace is non-increasing.
        bool improved = false;
        double t = step;
        for (int bt = 0; bt < 40 && res.evaluations < config.eval_budget; ++bt) {
            Vec yt(m);
            for (int k = 0; k < m; ++k) yt[k] = y[k] - t * g[k];
            const double ft = objective(yt);
            if (ft < fy - 1e-4 * t * ginf * ginf) {
                y = std::move(yt);
                fy = ft;
                step = 2.0 * t;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        res.history.push_back({fy, y});
        if (!improved && res.evaluations < config.eval_budget) {
            res.status = "stalled";
            break;
        }
    }

    res.best_coeffs.assign(nn, 0.0);
    for (int i = 0; i < m; ++i) res.best_coeffs[i + 1] = y[i];
    res.best_value = fy;

    // Best control, spline-resampled onto the quadrature grid.
    ControlSignal nodes_sig(node_t, res.best_coeffs);
    const std::size_t q = config.quad_points;
    Vec grid(q), uv(q);
    const double dt = (T - problem.t0) / static_cast<double>(q - 1);
    for (std::size_t i = 0; i < q; ++i) {
        grid[i] = problem.t0 + dt * static_cast<double>(i);
        uv[i] = nodes_sig(grid[i]);
    }
    uv.front() = 0.0;
    uv.back() = 0.0;
    return {std::move(res), ControlSignal(std::move(grid), std::move(uv))};
}

} // namespace tikreg
