#pragma once

#include <cmath>
#include <optional>

#include "tikreg/eigen.hpp"
#include "tikreg/matrix.hpp"

namespace tikreg {

/// A + eps * D^T D.
inline SymMatrix regularize(const SymMatrix& a, const TikhonovOperator& d, double eps) {
    if (d.cols() != a.n())
        throw dimension_error("regularize: D.cols must equal A.n");
    if (eps < 0.0) throw dimension_error("regularize: eps must be >= 0");
    SymMatrix out = a;
    if (eps > 0.0) out.add_scaled(d.gram(), eps);
    return out;
}

namespace detail {

// LDL^T without pivoting; fails on a nonpositive pivot carrying its value.
// Target matrices are tiny, no refinement.
struct LdltFactors {
    std::size_t n;
    std::vector<Vec> l; // unit lower triangle
    Vec d;
};

inline LdltFactors ldlt(const SymMatrix& m) {
    const std::size_t n = m.n();
    LdltFactors f{n, std::vector<Vec>(n, Vec(n, 0.0)), Vec(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) {
        double dj = m(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= f.l[j][k] * f.l[j][k] * f.d[k];
        if (!(dj > 0.0))
            throw numeric_error("ldlt: nonpositive pivot (matrix not positive definite)", dj);
        f.d[j] = dj;
        f.l[j][j] = 1.0;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= f.l[i][k] * f.l[j][k] * f.d[k];
            f.l[i][j] = s / dj;
        }
    }
    return f;
}

inline Vec ldlt_solve(const LdltFactors& f, const Vec& b) {
    const std::size_t n = f.n;
    Vec y = b;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) y[i] -= f.l[i][k] * y[k];
    for (std::size_t i = 0; i < n; ++i) y[i] /= f.d[i];
    for (std::size_t ii = n; ii-- > 0;)
        for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= f.l[k][ii] * y[k];
    return y;
}

} // namespace detail

/// Solves (A + eps D^T D) x = b by symmetric factorization.
inline Vec solve_regularized(const SymMatrix& a, const TikhonovOperator& d, double eps,
                             const Vec& b) {
    if (b.size() != a.n())
        throw dimension_error("solve_regularized: rhs size mismatch");
    const SymMatrix m = regularize(a, d, eps);
    return detail::ldlt_solve(detail::ldlt(m), b);
}

/// J(x) = 1/2 x^T A x - x^T b + eps/2 x^T D^T D x.
inline double quadratic_objective(const SymMatrix& a, const Vec& b, const TikhonovOperator& d,
                                  double eps, const Vec& x) {
    if (x.size() != a.n() || b.size() != a.n() || d.cols() != a.n())
        throw dimension_error("quadratic_objective: dimension mismatch");
    const double quad = 0.5 * dot(x, a.apply(x));
    const double lin = dot(x, b);
    double reg = 0.0;
    if (eps != 0.0) {
        const Vec dx = d.apply(x);
        reg = 0.5 * eps * dot(dx, dx);
    }
    return quad - lin + reg;
}

/// Rayleigh quotient (v^T D^T D v)/(v^T v): the first-order eigenvalue shift
/// from the Fredholm solvability condition. Scale invariant in v.
inline double first_order_shift(const TikhonovOperator& d, const Vec& v) {
    if (v.size() != d.cols())
        throw dimension_error("first_order_shift: vector size mismatch");
    const double vv = dot(v, v);
    if (vv == 0.0) throw dimension_error("first_order_shift: zero vector");
    const Vec dv = d.apply(v);
    return dot(dv, dv) / vv;
}

struct PerturbationReport {
    double lambda0_min = 0.0;
    double lambda0_max = 0.0;
    double lambda1_min = 0.0;
    double lambda1_max = 0.0;
    double predicted_condition = 0.0;
    double exact_condition = 0.0;
    double epsilon = 0.0;
    // The swapped-pairing prediction applies lambda1 of the min branch to the
    // max branch and vice versa; kept for auditing against the series pairing.
    double predicted_condition_swapped_pairing = 0.0;
};

/// First-order asymptotic condition number of A + eps D^T D.
/// lambda1^{min} is the shift at the eigenvector of lambda0^{min}: each
/// perturbation series expands one eigenbranch, so shifts stay with their
/// branch. Requires simple eigenvalues.
inline PerturbationReport predict_condition(const SymMatrix& a, const TikhonovOperator& d,
                                            double eps) {
    const EigenDecomposition e = eigen_sym(a);
    const std::size_t n = a.n();
    const double gap_tol = 1e-12 * std::max(1.0, a.frobenius_norm());
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (e.eigenvalues[k + 1] - e.eigenvalues[k] <= gap_tol)
            throw degenerate_spectrum_error(
                "predict_condition: degenerate spectrum, first-order formula invalid");

    PerturbationReport r;
    r.epsilon = eps;
    r.lambda0_min = e.eigenvalues.front();
    r.lambda0_max = e.eigenvalues.back();
    r.lambda1_min = first_order_shift(d, e.eigenvectors.front());
    r.lambda1_max = first_order_shift(d, e.eigenvectors.back());
    r.predicted_condition =
        (r.lambda0_max + eps * r.lambda1_max) / (r.lambda0_min + eps * r.lambda1_min);
    r.predicted_condition_swapped_pairing =
        (r.lambda0_max + eps * r.lambda1_min) / (r.lambda0_min + eps * r.lambda1_max);
    r.exact_condition = condition_number(regularize(a, d, eps));
    return r;
}

/// Inner objective of the max-min problem: min over eigenvectors of the
/// first-order shift. The outer max over D is not taken up here.
inline double tikhonov_gain(const TikhonovOperator& d, const EigenDecomposition& eig) {
    if (eig.eigenvectors.empty())
        throw dimension_error("tikhonov_gain: empty decomposition");
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& v : eig.eigenvectors) best = std::min(best, first_order_shift(d, v));
    return best;
}

} // namespace tikreg
