#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "tikreg/errors.hpp"

namespace tikreg {

inline constexpr double kPi = std::numbers::pi;

/// The harmonic-oscillator control problem on [0, pi] starting from rest.
struct ControlProblem {
    double epsilon;
    double t0 = 0.0;
    double horizon = kPi;
    double x0 = 0.0;
    double p0 = 0.0;

    explicit ControlProblem(double eps) : epsilon(eps) {
        if (eps < 0.0) throw std::domain_error("ControlProblem: epsilon must be >= 0");
    }
};

/// Which argument the csch factors in the optimal-state formula use. The
/// printed formula has csch(pi/eps); only the sqrt(eps) version agrees with
/// integrating the state system under the optimal control, so that is the
/// default. The printed variant stays evaluable for auditing.
enum class CschVariant { sqrt_eps, printed_eps };

namespace detail {

// Hyperbolic building blocks written as ratios of decaying exponentials;
// naive sinh/csch products overflow already near eps ~ 1e-3.
struct HypKit {
    double s;      // sqrt(eps)
    double em2;    // exp(-2 pi / s)
    double den;    // 1 - em2
    double coth;   // coth(pi/s)
    double csch;   // csch(pi/s)

    explicit HypKit(double eps)
        : s(std::sqrt(eps)),
          em2(std::exp(-2.0 * kPi / s)),
          den(1.0 - em2),
          coth((1.0 + em2) / den),
          csch(2.0 * std::exp(-kPi / s) / den) {}

    // sinh(z/s) / sinh(pi/s), finite for all z in [0, pi].
    double ratio_sinh(double z) const {
        return (std::exp((z - kPi) / s) - std::exp(-(z + kPi) / s)) / den;
    }
    // cosh(z/s) / sinh(pi/s).
    double ratio_cosh(double z) const {
        return (std::exp((z - kPi) / s) + std::exp(-(z + kPi) / s)) / den;
    }
};

inline void require_time(double t) {
    if (t < -1e-12 || t > kPi + 1e-12)
        throw std::domain_error("time outside [0, pi]");
}

inline void require_eps(double eps) {
    if (!(eps > 0.0))
        throw std::domain_error("closed form undefined for eps <= 0");
}

} // namespace detail

/// Closed-form optimal control u*(t; eps).
inline double optimal_control(double t, double eps) {
    detail::require_time(t);
    detail::require_eps(eps);
    const detail::HypKit k(eps);
    return ((eps + 2.0) * k.ratio_sinh(kPi - t) + eps * k.ratio_sinh(t) - std::cos(t) -
            eps - 1.0) /
           (eps + 1.0);
}

/// Closed-form optimal state x*(t; eps).
inline double optimal_state(double t, double eps, CschVariant variant = CschVariant::sqrt_eps) {
    detail::require_time(t);
    detail::require_eps(eps);
    const detail::HypKit k(eps);
    const double e = eps;

    if (variant == CschVariant::sqrt_eps) {
        const double t1 =
            k.s / ((e + 1.0) * (e + 1.0)) * (e * k.s * k.ratio_sinh(t) - e * k.csch * std::sin(t));
        const double t2 = -t * std::sin(t) / (2.0 * (e + 1.0)) + std::cos(t) - 1.0;
        const double t3 = k.s * (e + 2.0) / ((e + 1.0) * (e + 1.0)) *
                          (k.s * (k.ratio_sinh(kPi - t) - std::cos(t)) + k.coth * std::sin(t));
        return t1 + t2 + t3;
    }

    // Printed variant: csch(pi/eps) in place of csch(pi/sqrt(eps)). Products
    // are expanded so nothing overflows on [0, pi].
    const double em2e = std::exp(-2.0 * kPi / e);
    const double dene = 1.0 - em2e;
    auto csch_e_sinh = [&](double z) { // csch(pi/e) * sinh(z/s)
        return (std::exp(z / k.s - kPi / e) - std::exp(-z / k.s - kPi / e)) / dene;
    };
    const double csch_e_cosh_pi = // csch(pi/e) * cosh(pi/s)
        (std::exp(kPi / k.s - kPi / e) + std::exp(-kPi / k.s - kPi / e)) / dene;
    const double csch_e = 2.0 * std::exp(-kPi / e) / dene;
    const double t1 =
        k.s / ((e + 1.0) * (e + 1.0)) * (e * k.s * csch_e_sinh(t) - e * csch_e * std::sin(t));
    const double t2 = -t * std::sin(t) / (2.0 * (e + 1.0)) + std::cos(t) - 1.0;
    const double t3 = k.s * (e + 2.0) / ((e + 1.0) * (e + 1.0)) *
                      (k.s * (csch_e_sinh(kPi - t) - csch_e_sinh(kPi) * std::cos(t)) +
                       csch_e_cosh_pi * std::sin(t));
    return t1 + t2 + t3;
}

/// Closed-form optimal momentum p*(t; eps) = d/dt x*(t; eps).
inline double optimal_momentum(double t, double eps) {
    detail::require_time(t);
    detail::require_eps(eps);
    const detail::HypKit k(eps);
    const double e = eps;
    const double t1 =
        k.s / ((e + 1.0) * (e + 1.0)) * (e * k.ratio_cosh(t) - e * k.csch * std::cos(t));
    const double t2 = -(std::sin(t) + t * std::cos(t)) / (2.0 * (e + 1.0)) - std::sin(t);
    const double t3 = k.s * (e + 2.0) / ((e + 1.0) * (e + 1.0)) *
                      (-k.ratio_cosh(kPi - t) + k.s * std::sin(t) + k.coth * std::cos(t));
    return t1 + t2 + t3;
}

/// Optimal objective J*(eps). tanh/coth are already well behaved at both
/// ends of the eps range, so this is a direct evaluation.
inline double optimal_objective(double eps) {
    detail::require_eps(eps);
    const double s = std::sqrt(eps);
    const double th = std::tanh(kPi / (2.0 * s));
    const double cth = 1.0 / th;
    return s * th * (cth * cth / ((eps + 1.0) * (eps + 1.0)) + 1.0) -
           kPi * (2.0 * eps + 3.0) / (4.0 * (eps + 1.0));
}

struct LimitPair {
    double u;
    double x;
};

/// eps -> 0+ limits of the optimal control and state for t > 0. Note
/// u_limit(0+) = -2 while every admissible control vanishes at t = 0: the
/// limit leaves the admissible class, which is the whole point.
inline LimitPair limit_functions(double t) {
    detail::require_time(t);
    return {-1.0 - std::cos(t), -0.5 * t * std::sin(t) + std::cos(t) - 1.0};
}

struct CostatePair {
    std::function<double(double)> lambda_at;
    std::function<double(double)> mu_at;
};

/// Optimal costates lambda*(t) = -sin t, mu*(t) = -cos t - 1; both vanish
/// at t = pi (terminal conditions).
inline CostatePair costates() {
    return {[](double t) { return -std::sin(t); },
            [](double t) { return -std::cos(t) - 1.0; }};
}

namespace detail {

// 4th-order first derivative on a uniform grid: 5-point central stencils in
// the interior, one-sided 5-point stencils at the two points on each end.
inline std::vector<double> deriv4(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 5) throw dimension_error("deriv4: need at least 5 samples");
    std::vector<double> g(n);
    const double c = 1.0 / (12.0 * h);
    g[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    g[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        g[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    g[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] +
                     f[n - 5]);
    g[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] -
                     3.0 * f[n - 5]);
    return g;
}

} // namespace detail

/// Sup-norms of the five Euler-Lagrange residuals along the closed-form
/// optimum, derivatives taken by 4th-order finite differences.
/// Note the costate residual for p is |lambda* + d/dt mu*|: the saddle-point
/// Lagrangian gives dL/dp = -lambda, and the closed-form costates satisfy
/// exactly that sign.
struct ResidualReport {
    double stationarity_x; // |1 - lambda' + mu|
    double stationarity_p; // |lambda + mu'|
    double state_x;        // |x' - p|
    double state_p;        // |p' + x - u|
    double control;        // |u - mu - eps u''|

    // Same five sup-norms taken away from the one-sided end stencils, where
    // the differences keep their full interior order of accuracy.
    std::array<double, 5> interior;

    std::array<double, 5> as_array() const {
        return {stationarity_x, stationarity_p, state_x, state_p, control};
    }
};

inline ResidualReport euler_lagrange_residual(double eps, std::size_t grid_size) {
    detail::require_eps(eps);
    if (grid_size < 16) throw dimension_error("euler_lagrange_residual: grid_size >= 16");
    const std::size_t n = grid_size;
    const double h = kPi / static_cast<double>(n - 1);
    std::vector<double> t(n), u(n), x(n), p(n), lam(n), mu(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = h * static_cast<double>(i);
        u[i] = optimal_control(t[i], eps);
        x[i] = optimal_state(t[i], eps);
        p[i] = optimal_momentum(t[i], eps);
        lam[i] = -std::sin(t[i]);
        mu[i] = -std::cos(t[i]) - 1.0;
    }
    const auto du = detail::deriv4(u, h);
    const auto ddu = detail::deriv4(du, h);
    const auto dx = detail::deriv4(x, h);
    const auto dp = detail::deriv4(p, h);
    const auto dlam = detail::deriv4(lam, h);
    const auto dmu = detail::deriv4(mu, h);

    ResidualReport r{};
    // The twice-differenced u'' mixes one-sided stencils over the outer four
    // samples on each side; beyond that every difference is purely central.
    const std::size_t lo = 4, hi = n - 5;
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 5> v{
            std::abs(1.0 - dlam[i] + mu[i]), std::abs(lam[i] + dmu[i]),
            std::abs(dx[i] - p[i]), std::abs(dp[i] + x[i] - u[i]),
            std::abs(u[i] - mu[i] - eps * ddu[i])};
        r.stationarity_x = std::max(r.stationarity_x, v[0]);
        r.stationarity_p = std::max(r.stationarity_p, v[1]);
        r.state_x = std::max(r.state_x, v[2]);
        r.state_p = std::max(r.state_p, v[3]);
        r.control = std::max(r.control, v[4]);
        if (i >= lo && i <= hi)
            for (std::size_t k = 0; k < 5; ++k) r.interior[k] = std::max(r.interior[k], v[k]);
    }
    return r;
}

} // namespace tikreg
