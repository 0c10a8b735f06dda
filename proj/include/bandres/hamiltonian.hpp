#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandres/dense_matrix.hpp"
#include "bandres/oscillator_basis.hpp"

namespace bandres {

inline constexpr int kMaxDegree = 8;

// V(t) = sum_k coeffs[k] t^k in the local coordinate t = x - origin.
struct PolynomialPotential {
    std::vector<Complex> coeffs;
    double origin = 0.0;

    PolynomialPotential() = default;
    explicit PolynomialPotential(std::vector<Complex> c, double a = 0.0)
        : coeffs(std::move(c)), origin(a) {}

    // Index of the highest nonzero coefficient, -1 for the zero polynomial.
    int degree() const {
        for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
            if (coeffs[k] != Complex{}) return k;
        return -1;
    }

    Complex coeff(int k) const {
        return k >= 0 && k < static_cast<int>(coeffs.size()) ? coeffs[k] : Complex{};
    }

    // Adds c t^k, growing the coefficient list as needed.
    PolynomialPotential& add_term(int k, Complex c) {
        if (k < 0) throw std::invalid_argument("PolynomialPotential: negative power");
        if (k >= static_cast<int>(coeffs.size())) coeffs.resize(k + 1);
        coeffs[k] += c;
        return *this;
    }

    bool has_odd_powers() const {
        for (std::size_t k = 1; k < coeffs.size(); k += 2)
            if (coeffs[k] != Complex{}) return true;
        return false;
    }

    // Horner evaluation at local coordinate t.
    Complex evaluate(Complex t) const {
        Complex acc{};
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    bool operator==(const PolynomialPotential&) const = default;
};

/// Re-expands the polynomial about local point a: result(t) == pot(a + t).
/// The new origin is pot.origin + a.
inline PolynomialPotential shift_origin(const PolynomialPotential& pot, double a) {
    const int n = static_cast<int>(pot.coeffs.size());
    std::vector<Complex> out(n);
    // out[j] = sum_{k>=j} c_k C(k,j) a^{k-j}
    for (int k = 0; k < n; ++k) {
        double binom = 1.0;
        for (int j = k; j >= 0; --j) {
            out[j] += pot.coeffs[k] * binom * std::pow(a, k - j);
            binom = binom * j / (k - j + 1);
        }
    }
    return PolynomialPotential(std::move(out), pot.origin + a);
}

/// 1-based compact index of H(J,K), J <= K <= J+b:  b*J + K - b.
/// For b = 3 this is the HC(3J+K-3) layout.
inline int band_index(int row, int col, int b) {
    if (b < 0) throw std::invalid_argument("band_index: negative halfwidth");
    if (col < row || col > row + b)
        throw std::out_of_range("band_index: column " + std::to_string(col) +
                                " outside [" + std::to_string(row) + ", " +
                                std::to_string(row + b) + "]");
    return b * row + col - b;
}

// Complex symmetric matrix held as its upper band, row J occupying the
// contiguous slots band_index(J, J..J+b). Slots past the last column are zero.
class BandedComplexSymmetric {
public:
    BandedComplexSymmetric() = default;
    BandedComplexSymmetric(int dim, int halfwidth)
        : dim_(dim), b_(halfwidth), data_(static_cast<std::size_t>(dim) * (halfwidth + 1)) {
        if (dim < 1) throw std::invalid_argument("BandedComplexSymmetric: dim must be >= 1");
        if (halfwidth < 0) throw std::invalid_argument("BandedComplexSymmetric: negative halfwidth");
    }

    int dim() const noexcept { return dim_; }
    int halfwidth() const noexcept { return b_; }
    const std::vector<Complex>& data() const noexcept { return data_; }

    // 0-based access; (i, j) outside the band reads as exact zero.
    Complex get(int i, int j) const {
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= dim_) throw std::out_of_range("BandedComplexSymmetric::get");
        if (j - i > b_) return {};
        return data_[offset(i, j)];
    }

    // Sets both (i, j) and (j, i); |i - j| must lie inside the band.
    void set(int i, int j, Complex v) {
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= dim_ || j - i > b_)
            throw std::out_of_range("BandedComplexSymmetric::set outside band");
        data_[offset(i, j)] = v;
    }

    // Storage slot of the upper-band entry (i, j), i <= j <= i + b, 0-based.
    std::size_t offset(int i, int j) const noexcept {
        return static_cast<std::size_t>(band_index(i + 1, j + 1, b_) - 1);
    }

    // Infinity norm of the full symmetric matrix.
    double inf_norm() const {
        double best = 0.0;
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = std::max(0, i - b_); j < std::min(dim_, i + b_ + 1); ++j) s += std::abs(get(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    BandedComplexSymmetric shifted(Complex c) const {
        BandedComplexSymmetric out = *this;
        for (int i = 0; i < dim_; ++i) out.data_[offset(i, i)] += c;
        return out;
    }

    bool operator==(const BandedComplexSymmetric&) const = default;

private:
    int dim_ = 0;
    int b_ = 0;
    std::vector<Complex> data_;
};

inline constexpr int kMaxDenseDim = 512;

inline DenseMatrix to_dense(const BandedComplexSymmetric& m) {
    if (m.dim() > kMaxDenseDim)
        throw std::length_error("to_dense: dimension " + std::to_string(m.dim()) + " exceeds " +
                                std::to_string(kMaxDenseDim));
    DenseMatrix d(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) d(i, j) = m.get(i, j);
    return d;
}

/// Matrix of -alpha D^2 + V in the basis of `spec`.
///
/// The kinetic term is never formed: the reference oscillator contributes its
/// level energies on the diagonal, and the perturbation is V - W x^2 so that
/// the W x^2 already inside the reference is not counted twice. Power
/// matrices are built on the full padded basis and then restricted to the
/// requested parity class, which keeps every retained element exact.
inline BandedComplexSymmetric assemble(const BasisSpec& spec, const PolynomialPotential& pot) {
    spec.validate();
    const int degree = pot.degree();
    if (degree < 1)
        throw std::invalid_argument("assemble: potential degree must be >= 1");
    if (degree > kMaxDegree)
        throw std::invalid_argument("assemble: degree " + std::to_string(degree) +
                                    " exceeds supported maximum " + std::to_string(kMaxDegree));
    if (spec.parity != Parity::Full && pot.has_odd_powers())
        throw std::invalid_argument(std::string("assemble: ") + to_string(spec.parity) +
                                    " parity basis requires a potential with even powers only");

    PolynomialPotential perturbation = pot;
    perturbation.add_term(2, -spec.w);
    const int top = std::max(degree, 2);
    const int full_b = top;
    const int b = spec.parity == Parity::Full ? full_b : full_b / 2;
    const int full = spec.full_size();

    BandedComplexSymmetric h(spec.dim, b);
    for (int i = 0; i < spec.dim; ++i)
        h.set(i, i, level_energy(spec, spec.oscillator_index(i)) + perturbation.coeff(0));

    for (int k = 1; k <= top; ++k) {
        const Complex c = perturbation.coeff(k);
        if (c == Complex{}) continue;
        const DenseMatrix xk = build_power_matrix(spec, k, full);
        for (int i = 0; i < spec.dim; ++i) {
            const int ni = spec.oscillator_index(i);
            for (int j = i; j < std::min(spec.dim, i + b + 1); ++j) {
                const int nj = spec.oscillator_index(j);
                const Complex v = xk(ni, nj);
                if (v != Complex{}) h.set(i, j, h.get(i, j) + c * v);
            }
        }
    }
    return h;
}

} // namespace bandres
