#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tikreg/errors.hpp"

namespace tikreg {

/// C^2 cubic interpolant with not-a-knot end conditions (third derivative
/// continuous across the first and last interior knots). Exact on cubic
/// polynomials. Needs at least 4 points.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> knots, std::vector<double> values)
        : x_(std::move(knots)), y_(std::move(values)) {
        const std::size_t n = x_.size();
        if (n < 4) throw dimension_error("CubicSpline: not-a-knot needs >= 4 points");
        if (y_.size() != n) throw dimension_error("CubicSpline: size mismatch");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i]))
                throw dimension_error("CubicSpline: knots must be strictly increasing");
        build();
        // Uniform-grid fast path for segment lookup.
        h_uniform_ = (x_[1] - x_[0]);
        uniform_ = true;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (std::abs((x_[i + 1] - x_[i]) - h_uniform_) > 1e-12 * std::abs(h_uniform_)) {
                uniform_ = false;
                break;
            }
        }
    }

    double operator()(double t) const {
        const std::size_t n = x_.size();
        std::size_t i;
        if (uniform_) {
            double fi = std::floor((t - x_[0]) / h_uniform_);
            i = static_cast<std::size_t>(std::clamp(fi, 0.0, static_cast<double>(n - 2)));
        } else {
            auto it = std::upper_bound(x_.begin(), x_.end(), t);
            i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                (it - x_.begin()) - 1, 0, static_cast<std::ptrdiff_t>(n - 2)));
        }
        // Knot hits return stored values exactly.
        if (t == x_[i]) return y_[i];
        if (t == x_[i + 1]) return y_[i + 1];
        const double dx = t - x_[i];
        return y_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
    }

    double derivative(double t) const {
        const std::size_t n = x_.size();
        std::size_t i;
        if (uniform_) {
            double fi = std::floor((t - x_[0]) / h_uniform_);
            i = static_cast<std::size_t>(std::clamp(fi, 0.0, static_cast<double>(n - 2)));
        } else {
            auto it = std::upper_bound(x_.begin(), x_.end(), t);
            i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                (it - x_.begin()) - 1, 0, static_cast<std::ptrdiff_t>(n - 2)));
        }
        const double dx = t - x_[i];
        return b_[i] + dx * (2.0 * c_[i] + dx * 3.0 * d_[i]);
    }

    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    // Moment (second-derivative) formulation. Not-a-knot rows are eliminated
    // analytically so the core solve is plain Thomas on the interior moments.
    void build() {
        const std::size_t n = x_.size();
        const std::size_t m = n - 2; // interior unknowns M_1..M_{n-2}
        std::vector<double> h(n - 1), del(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            del[i] = (y_[i + 1] - y_[i]) / h[i];
        }

        std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1; // global knot index
            lo[k] = h[i - 1] / 6.0;
            di[k] = (h[i - 1] + h[i]) / 3.0;
            up[k] = h[i] / 6.0;
            rhs[k] = del[i] - del[i - 1];
        }
        // Not-a-knot at the left: h1*M0 - (h0+h1)*M1 + h0*M2 = 0, so
        // M0 = ((h0+h1)*M1 - h0*M2)/h1; substitute into the first row.
        di[0] += lo[0] * (h[0] + h[1]) / h[1];
        up[0] -= lo[0] * h[0] / h[1];
        lo[0] = 0.0;
        // Mirror at the right.
        const std::size_t e = n - 2; // last interval pair: h[e-1], h[e]... h sizes n-1
        di[m - 1] += up[m - 1] * (h[n - 2] + h[n - 3]) / h[n - 3];
        lo[m - 1] -= up[m - 1] * h[n - 2] / h[n - 3];
        up[m - 1] = 0.0;
        (void)e;

        // Thomas elimination.
        for (std::size_t k = 1; k < m; ++k) {
            const double w = lo[k] / di[k - 1];
            di[k] -= w * up[k - 1];
            rhs[k] -= w * rhs[k - 1];
        }
        std::vector<double> mom(n, 0.0);
        mom[n - 2] = rhs[m - 1] / di[m - 1];
        for (std::size_t k = m - 1; k-- > 0;)
            mom[k + 1] = (rhs[k] - up[k] * mom[k + 2]) / di[k];
        mom[0] = ((h[0] + h[1]) * mom[1] - h[0] * mom[2]) / h[1];
        mom[n - 1] = ((h[n - 2] + h[n - 3]) * mom[n - 2] - h[n - 2] * mom[n - 3]) / h[n - 3];

        b_.resize(n - 1);
        c_.resize(n - 1);
        d_.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            c_[i] = mom[i] / 2.0;
            d_[i] = (mom[i + 1] - mom[i]) / (6.0 * h[i]);
            b_[i] = del[i] - h[i] * (2.0 * mom[i] + mom[i + 1]) / 6.0;
        }
    }

    std::vector<double> x_, y_, b_, c_, d_;
    double h_uniform_ = 1.0;
    bool uniform_ = false;
};

/// Convenience wrapper matching the name used throughout the pipeline.
inline CubicSpline cubic_spline(std::vector<double> grid, std::vector<double> values) {
    return CubicSpline(std::move(grid), std::move(values));
}

} // namespace tikreg
