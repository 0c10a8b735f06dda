#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "bandres/errors.hpp"
#include "bandres/hamiltonian.hpp"

namespace bandres {

using ComplexVector = std::vector<Complex>;

inline constexpr double kPivotFloor = 1e-300;

// Eliminated form of (H - E) from symmetric Gaussian elimination without
// pivoting. Row k of `factors` holds the reduced upper band (pivot first);
// the multiplier for row i > k is factors(k, i) / factors(k, k) by symmetry,
// so no lower triangle is stored.
//
// solve() is const and uses no shared scratch, so one factorization may serve
// concurrent solves.
class BandFactorization {
public:
    BandFactorization(const BandedComplexSymmetric& m, Complex shift)
        : n_(m.dim()), b_(m.halfwidth()), a_(m.shifted(-shift).data()), shift_(shift) {
        const int n = n_;
        const int b = b_;
        std::vector<Complex>& a = a_;
        for (int k = 0; k < n; ++k) {
            const Complex pivot = a[offset(k, k)];
            if (!(std::abs(pivot) > kPivotFloor)) throw SingularShiftError(shift, k + 1);
            const int last = std::min(n - 1, k + b);
            for (int i = k + 1; i <= last; ++i) {
                const Complex mult = a[offset(k, i)] / pivot;
                if (mult == Complex{}) continue;
                // Row i loses mult * row k on columns i..k+b; fill stays in the band.
                for (int j = i; j <= last; ++j) a[offset(i, j)] -= mult * a[offset(k, j)];
            }
        }
    }

    int dim() const noexcept { return n_; }
    int halfwidth() const noexcept { return b_; }
    Complex shift() const noexcept { return shift_; }
    const std::vector<Complex>& factors() const noexcept { return a_; }
    Complex pivot(int k) const { return a_.at(offset(k, k)); }

    ComplexVector solve(std::span<const Complex> y) const {
        const int n = dim();
        const int b = halfwidth();
        if (static_cast<int>(y.size()) != n)
            throw std::invalid_argument("solve: right-hand side has length " +
                                        std::to_string(y.size()) + ", expected " +
                                        std::to_string(n));
        const std::vector<Complex>& a = a_;
        ComplexVector x(y.begin(), y.end());
        for (int k = 0; k < n; ++k) {
            const Complex pivot = a[offset(k, k)];
            const Complex xk = x[k];
            if (xk == Complex{}) continue;
            const int last = std::min(n - 1, k + b);
            for (int i = k + 1; i <= last; ++i) x[i] -= a[offset(k, i)] / pivot * xk;
        }
        for (int k = n - 1; k >= 0; --k) {
            Complex s = x[k];
            const int last = std::min(n - 1, k + b);
            for (int j = k + 1; j <= last; ++j) s -= a[offset(k, j)] * x[j];
            x[k] = s / a[offset(k, k)];
        }
        return x;
    }

private:
    // Same slot layout as BandedComplexSymmetric.
    std::size_t offset(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * (b_ + 1) + (j - i);
    }

    int n_;
    int b_;
    std::vector<Complex> a_;
    Complex shift_;
};

/// Factors (m - e I); m itself is left untouched.
inline BandFactorization factor_shifted(const BandedComplexSymmetric& m, Complex e) {
    return BandFactorization(m, e);
}

inline ComplexVector solve(const BandFactorization& f, std::span<const Complex> y) { return f.solve(y); }

/// y = m x using only the stored band.
inline ComplexVector multiply(const BandedComplexSymmetric& m, std::span<const Complex> x) {
    const int n = m.dim();
    const int b = m.halfwidth();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("multiply: length mismatch");
    ComplexVector y(n);
    for (int i = 0; i < n; ++i) {
        Complex s{};
        for (int j = std::max(0, i - b); j <= std::min(n - 1, i + b); ++j) s += m.get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// Row i of m x.
inline Complex multiply_row(const BandedComplexSymmetric& m, int i, std::span<const Complex> x) {
    const int n = m.dim();
    const int b = m.halfwidth();
    Complex s{};
    for (int j = std::max(0, i - b); j <= std::min(n - 1, i + b); ++j) s += m.get(i, j) * x[j];
    return s;
}

inline double inf_norm(std::span<const Complex> x) {
    double best = 0.0;
    for (const Complex& v : x) best = std::max(best, std::abs(v));
    return best;
}

/// ||(m - e) x||_inf / ||x||_inf
inline double residual_norm(const BandedComplexSymmetric& m, Complex e, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != m.dim())
        throw std::invalid_argument("residual_norm: length mismatch");
    const double xn = inf_norm(x);
    if (xn == 0.0) throw std::invalid_argument("residual_norm: zero column");
    ComplexVector r = multiply(m, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= e * x[i];
    return inf_norm(r) / xn;
}

} // namespace bandres
