#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "tikreg/matrix.hpp"

namespace tikreg {

/// Eigenvalues ascending; eigenvectors[k] is the unit eigenvector paired
/// with eigenvalues[k].
struct EigenDecomposition {
    Vec eigenvalues;
    std::vector<Vec> eigenvectors;
};

namespace detail {

inline double offdiag_frobenius(const std::vector<Vec>& a) {
    const std::size_t n = a.size();
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) s += a[p][q] * a[p][q];
    return std::sqrt(2.0 * s);
}

} // namespace detail

/// Cyclic Jacobi with Rutishauser updates. Sweep cap 50, convergence when the
/// off-diagonal Frobenius norm drops below 1e-14 * ||A||_F. Jacobi keeps high
/// relative accuracy for the tiny eigenvalues the condition-number workload
/// cares about.
inline EigenDecomposition eigen_sym(const SymMatrix& m) {
    const std::size_t n = m.n();
    std::vector<Vec> a(n, Vec(n));
    std::vector<Vec> v(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        v[i][i] = 1.0;
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    }

    const double threshold = 1e-14 * std::max(1.0, m.frobenius_norm());
    constexpr int max_sweeps = 50;

    bool converged = (n == 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (detail::offdiag_frobenius(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = a[p][i] = aip - s * (aiq + tau * aip);
                    a[i][q] = a[q][i] = aiq + s * (aip - tau * aiq);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = vip - s * (viq + tau * vip);
                    v[i][q] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if (!converged && detail::offdiag_frobenius(a) > threshold)
        throw numeric_error("eigen_sym: Jacobi did not converge in 50 sweeps",
                            detail::offdiag_frobenius(a));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, Vec(n));
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a[order[k]][order[k]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors[k][i] = v[i][order[k]];
    }
    return out;
}

/// lambda_max / lambda_min for symmetric PSD input. Returns +infinity when
/// lambda_min <= 1e-14 * lambda_max so sweeps over mu -> 0 stay plottable.
inline double condition_number(const SymMatrix& m) {
    constexpr double tol = 1e-14;
    const EigenDecomposition e = eigen_sym(m);
    const double lmin = e.eigenvalues.front();
    const double lmax = e.eigenvalues.back();
    if (lmin < -tol * std::max(1.0, lmax))
        throw numeric_error("condition_number: matrix is not positive semi-definite", lmin);
    if (lmin <= tol * lmax || lmax <= 0.0)
        return std::numeric_limits<double>::infinity();
    return lmax / lmin;
}

} // namespace tikreg
