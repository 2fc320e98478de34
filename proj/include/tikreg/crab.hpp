#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tikreg/sim.hpp"

namespace tikreg {

/// Sine basis on [t0, T]: mode j contributes sin(j pi (t - t0)/T), so every
/// reconstructed control vanishes at both endpoints.
struct CrabBasis {
    int modes = 12;
    double t0 = 0.0;
    double T = kPi;
};

struct DEConfig {
    double F = 0.8;   // differential weight
    double CR = 0.7;  // crossover rate
    int NP = 120;     // population size
    int Nmax = 300;   // generations
    int ND = 12;      // dimensions
    std::uint64_t seed = 0;
    // Donor trio resampled per dimension (the reference code path). Set false
    // for the textbook one-trio-per-vector variant.
    bool per_dimension_donors = true;

    void validate() const {
        if (!(F > 0.0 && F <= 2.0)) throw dimension_error("DEConfig: need 0 < F <= 2");
        if (!(CR >= 0.0 && CR <= 1.0)) throw dimension_error("DEConfig: need 0 <= CR <= 1");
        if (NP < 4) throw dimension_error("DEConfig: need NP >= 4");
        if (ND < 1) throw dimension_error("DEConfig: need ND >= 1");
        if (Nmax < 1) throw dimension_error("DEConfig: need Nmax >= 1");
    }
};

struct GenerationRecord {
    double best_value;
    Vec best_coeffs;
};

struct OptimResult {
    Vec best_coeffs;
    double best_value = 0.0;
    std::vector<GenerationRecord> history;
    long evaluations = 0;
    long nonfinite_rejections = 0;
    std::string status = "completed";
};

/// Sum of coeffs_j * sin(j pi (t - t0)/T). Raw coefficients; the quadratic
/// amplitude decay lives in the initialization, not here. Endpoints return
/// exactly zero.
inline double reconstruct(const Vec& coeffs, double t, const CrabBasis& basis = {}) {
    if (t < basis.t0 - 1e-12 || t > basis.t0 + basis.T + 1e-12)
        throw std::domain_error("reconstruct: t outside horizon");
    if (t == basis.t0 || t == basis.t0 + basis.T) return 0.0;
    double s = 0.0;
    const double w = kPi * (t - basis.t0) / basis.T;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        s += coeffs[j] * std::sin(static_cast<double>(j + 1) * w);
    return s;
}

namespace detail {

// Fixed mapping from raw 64-bit output to [0,1); avoids the libstdc++/libc++
// distribution differences so seeded runs are portable.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uniform_index(std::mt19937_64& rng, int n) {
    int k = static_cast<int>(uniform01(rng) * n);
    return k >= n ? n - 1 : k;
}

// Three pairwise-distinct donor indices, all different from `self`;
// the whole triple is redrawn until valid, mirroring the reference code.
inline std::array<int, 3> donor_trio(std::mt19937_64& rng, int np, int self) {
    while (true) {
        const int a = uniform_index(rng, np);
        const int b = uniform_index(rng, np);
        const int c = uniform_index(rng, np);
        if (a != b && b != c && a != c && a != self && b != self && c != self)
            return {a, b, c};
    }
}

} // namespace detail

/// Population draw: amplitude cap l_j = (2r-1)/j^2 per row, then entry
/// (j,i) = l_j * (2r-1). Stream order is row-major: all l_j first, then row
/// by row across members. Every entry in row j lies in [-1/j^2, 1/j^2].
inline std::vector<Vec> init_population(const DEConfig& config, std::mt19937_64& rng) {
    config.validate();
    Vec l(config.ND);
    for (int j = 0; j < config.ND; ++j) {
        const double jj = static_cast<double>(j + 1);
        l[j] = (2.0 * detail::uniform01(rng) - 1.0) / (jj * jj);
    }
    std::vector<Vec> pop(config.NP, Vec(config.ND));
    for (int j = 0; j < config.ND; ++j)
        for (int i = 0; i < config.NP; ++i)
            pop[i][j] = l[j] * (2.0 * detail::uniform01(rng) - 1.0);
    return pop;
}

inline std::vector<Vec> init_population(const DEConfig& config) {
    std::mt19937_64 rng(config.seed);
    return init_population(config, rng);
}

/// Differential Evolution with greedy selection. Per member and per
/// dimension, a fresh donor trio (a,b,c) yields a + F*(b-c) when the
/// crossover coin lands below CR, else the current entry is kept. Candidates
/// are scored against the parent population and selection runs in member
/// order after all draws, so the result is independent of evaluation order.
inline OptimResult de_optimize(const std::function<double(const Vec&)>& objective,
                               const DEConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::vector<Vec> pop = init_population(config, rng);
    OptimResult res;

    Vec fitness(config.NP);
    for (int i = 0; i < config.NP; ++i) {
        fitness[i] = objective(pop[i]);
        ++res.evaluations;
        if (!std::isfinite(fitness[i])) {
            fitness[i] = std::numeric_limits<double>::infinity();
            ++res.nonfinite_rejections;
        }
    }

    std::vector<Vec> candidates(config.NP, Vec(config.ND));
    Vec cand_fitness(config.NP);
    for (int gen = 0; gen < config.Nmax; ++gen) {
        // All RNG draws happen here, single-threaded, in member order.
        for (int i = 0; i < config.NP; ++i) {
            std::array<int, 3> trio{};
            if (!config.per_dimension_donors)
                trio = detail::donor_trio(rng, config.NP, i);
            for (int j = 0; j < config.ND; ++j) {
                if (config.per_dimension_donors)
                    trio = detail::donor_trio(rng, config.NP, i);
                const double r = detail::uniform01(rng);
                candidates[i][j] =
                    (r < config.CR)
                        ? pop[trio[0]][j] + config.F * (pop[trio[1]][j] - pop[trio[2]][j])
                        : pop[i][j];
            }
        }
        for (int i = 0; i < config.NP; ++i) {
            cand_fitness[i] = objective(candidates[i]);
            ++res.evaluations;
        }
        for (int i = 0; i < config.NP; ++i) {
            if (!std::isfinite(cand_fitness[i])) {
                ++res.nonfinite_rejections;
                continue;
            }
            if (cand_fitness[i] < fitness[i]) {
                pop[i] = candidates[i];
                fitness[i] = cand_fitness[i];
            }
        }
        int best = 0;
        for (int i = 1; i < config.NP; ++i)
            if (fitness[i] < fitness[best]) best = i;
        res.history.push_back({fitness[best], pop[best]});
    }

    int best = 0;
    for (int i = 1; i < config.NP; ++i)
        if (fitness[i] < fitness[best]) best = i;
    res.best_coeffs = pop[best];
    res.best_value = fitness[best];
    return res;
}

/// CRAB pipeline: DE over basis coefficients, objective evaluated by
/// simulating the state system under the reconstructed control. The sine
/// table over the quadrature grid is precomputed once.
inline std::pair<OptimResult, ControlSignal> crab_solve(const ControlProblem& problem,
                                                        const CrabBasis& basis,
                                                        const DEConfig& config,
                                                        std::size_t quad_points = kDefaultQuadPoints) {
    if (basis.modes != config.ND)
        throw dimension_error("crab_solve: basis.modes must equal config.ND");
    const std::size_t n = quad_points;
    const double dt = (problem.horizon - problem.t0) / static_cast<double>(n - 1);
    Vec grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = problem.t0 + dt * static_cast<double>(i);

    // table[j][i] = sin((j+1) pi (t_i - t0)/T), endpoints pinned to 0 so
    // every sampled control is admissible exactly.
    std::vector<Vec> table(basis.modes, Vec(n, 0.0));
    for (int j = 0; j < basis.modes; ++j)
        for (std::size_t i = 1; i + 1 < n; ++i)
            table[j][i] =
                std::sin(static_cast<double>(j + 1) * kPi * (grid[i] - basis.t0) / basis.T);

    auto sample = [&](const Vec& coeffs) {
        Vec u(n, 0.0);
        for (int j = 0; j < basis.modes; ++j) {
            const double cj = coeffs[j];
            if (cj == 0.0) continue;
            for (std::size_t i = 1; i + 1 < n; ++i) u[i] += cj * table[j][i];
        }
        return u;
    };
    auto objective = [&](const Vec& coeffs) {
        return evaluate_objective(ControlSignal(grid, sample(coeffs)), problem, n);
    };

    OptimResult res = de_optimize(objective, config);
    ControlSignal best(grid, sample(res.best_coeffs));
    return {std::move(res), std::move(best)};
}

} // namespace tikreg
