#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tikreg/errors.hpp"

namespace tikreg {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Dense real symmetric matrix. Construction symmetrizes, so
/// entry(i,j) == entry(j,i) holds exactly.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        if (n == 0) throw dimension_error("SymMatrix: dimension must be positive");
    }

    // Builds (M + M^T)/2 from a general square array (row-major).
    static SymMatrix from_general(std::size_t n, const Vec& rowmajor) {
        if (rowmajor.size() != n * n)
            throw dimension_error("SymMatrix::from_general: size mismatch");
        SymMatrix s(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = 0.5 * (rowmajor[i * n + j] + rowmajor[j * n + i]);
                if (!std::isfinite(v))
                    throw numeric_error("SymMatrix: non-finite entry", v);
                s.a_[i * n + j] = s.a_[j * n + i] = v;
            }
        return s;
    }

    static SymMatrix identity(std::size_t n) {
        SymMatrix s(n);
        for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
        return s;
    }

    std::size_t n() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }

    Vec apply(const Vec& x) const {
        if (x.size() != n_) throw dimension_error("SymMatrix::apply: size mismatch");
        Vec y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    SymMatrix& add_scaled(const SymMatrix& other, double c) {
        if (other.n_ != n_) throw dimension_error("SymMatrix: dimension mismatch");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += c * other.a_[k];
        return *this;
    }

private:
    std::size_t n_;
    Vec a_; // row-major, kept symmetric
};

/// Rectangular m x n operator D; the regularizer is D^T D.
class TikhonovOperator {
public:
    TikhonovOperator(std::size_t rows, std::size_t cols)
        : m_(rows), n_(cols), d_(rows * cols, 0.0) {
        if (rows == 0 || cols == 0)
            throw dimension_error("TikhonovOperator: dimensions must be positive");
    }

    static TikhonovOperator zero(std::size_t rows, std::size_t cols) {
        return TikhonovOperator(rows, cols);
    }

    static TikhonovOperator identity(std::size_t n) {
        TikhonovOperator d(n, n);
        for (std::size_t i = 0; i < n; ++i) d.set(i, i, 1.0);
        return d;
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) { d_[i * n_ + j] = v; }

    Vec apply(const Vec& x) const {
        if (x.size() != n_) throw dimension_error("TikhonovOperator::apply: size mismatch");
        Vec y(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += d_[i * n_ + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    /// D^T D, exactly symmetric by construction.
    SymMatrix gram() const {
        SymMatrix g(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < m_; ++k) s += d_[k * n_ + i] * d_[k * n_ + j];
                g.set(i, j, s);
            }
        return g;
    }

private:
    std::size_t m_, n_;
    Vec d_; // row-major
};

/// Forward-difference operator: (n+1) x n, first row e_1^T, interior rows
/// e_{i+1}-e_i, last row -e_n^T. For n=2 this is [[1,0],[-1,1],[0,-1]].
inline TikhonovOperator build_forward_difference(std::size_t n) {
    if (n == 0) throw dimension_error("build_forward_difference: n must be >= 1");
    TikhonovOperator d(n + 1, n);
    d.set(0, 0, 1.0);
    for (std::size_t i = 1; i < n; ++i) {
        d.set(i, i - 1, -1.0);
        d.set(i, i, 1.0);
    }
    d.set(n, n - 1, -1.0);
    return d;
}

} // namespace tikreg
