#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "bandres/dense_matrix.hpp"

namespace bandres {

using Complex = std::complex<double>;

enum class Parity { Even, Odd, Full };

inline const char* to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        case Parity::Full: return "full";
    }
    return "?";
}

inline Parity parity_from_string(const std::string& s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    if (s == "full") return Parity::Full;
    throw std::invalid_argument("unknown parity '" + s + "' (expected even, odd or full)");
}

// Reference oscillator -alpha D^2 + W x^2 with complex W, restricted to `dim`
// retained functions of the chosen parity class.
struct BasisSpec {
    double alpha = 1.0;
    Complex w{1.0, 0.0};
    Parity parity = Parity::Full;
    int dim = 1;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("BasisSpec: alpha must be finite and > 0");
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw std::invalid_argument("BasisSpec: W must be finite");
        if (dim < 1) throw std::invalid_argument("BasisSpec: dim must be >= 1");
    }

    // Oscillator quantum number of the i-th retained basis function.
    int oscillator_index(int i) const {
        switch (parity) {
            case Parity::Even: return 2 * i;
            case Parity::Odd: return 2 * i + 1;
            case Parity::Full: return i;
        }
        return i;
    }

    // Size of the unrestricted basis that contains every retained function.
    int full_size() const { return parity == Parity::Full ? dim : 2 * dim; }
};

/// Principal k-th root (k = 2 or 4), argument in (-pi/k, pi/k].
/// A signed-zero imaginary part is treated as +0 so the negative real axis
/// maps onto the upper edge of the range. principal_root(0, k) == 0.
inline Complex principal_root(Complex z, int k) {
    if (std::isnan(z.real()) || std::isnan(z.imag()) || std::isinf(z.real()) ||
        std::isinf(z.imag()))
        throw std::domain_error("principal_root: non-finite argument");
    if (k != 2 && k != 4) throw std::invalid_argument("principal_root: k must be 2 or 4");
    if (z == Complex{}) return {};
    if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
    Complex r = std::sqrt(z);
    if (k == 4) r = std::sqrt(r);
    return r;
}

/// E_n = (2n+1) (W alpha)^{1/2}
inline Complex level_energy(const BasisSpec& spec, int n) {
    if (n < 0) throw std::invalid_argument("level_energy: n must be >= 0");
    return static_cast<double>(2 * n + 1) * principal_root(spec.w * spec.alpha, 2);
}

/// <n|x|n+1> = (alpha / 4W)^{1/4} (n+1)^{1/2}
inline Complex x_matrix_element(const BasisSpec& spec, int n) {
    if (n < 0) throw std::invalid_argument("x_matrix_element: n must be >= 0");
    if (spec.w == Complex{}) throw std::domain_error("x_matrix_element: W = 0");
    return principal_root(spec.alpha / (4.0 * spec.w), 4) * std::sqrt(static_cast<double>(n + 1));
}

/// Truncated x matrix on functions 0..size-1 (no parity restriction).
inline DenseMatrix build_x_matrix(const BasisSpec& spec, int size) {
    if (size < 1) throw std::invalid_argument("build_x_matrix: size must be >= 1");
    DenseMatrix x(size);
    if (size == 1) return x;
    const Complex scale = x_matrix_element(spec, 0);
    for (int n = 0; n + 1 < size; ++n) {
        const Complex v = scale * std::sqrt(static_cast<double>(n + 1));
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return x;
}

namespace detail {

// Product of two banded matrices truncated to their leading d x d block.
// Only the upper triangle is computed; the lower one is mirrored so the
// result is exactly symmetric.
inline DenseMatrix banded_product(const DenseMatrix& a, int bw_a, const DenseMatrix& b, int bw_b,
                                  int d) {
    DenseMatrix out(d);
    const int bw = bw_a + bw_b;
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < std::min(d, i + bw + 1); ++j) {
            Complex sum{};
            const int lo = std::max({0, i - bw_a, j - bw_b});
            const int hi = std::min({d - 1, i + bw_a, j + bw_b});
            for (int l = lo; l <= hi; ++l) sum += a(i, l) * b(l, j);
            out(i, j) = sum;
            out(j, i) = sum;
        }
    }
    return out;
}

} // namespace detail

/// Exact size x size block of x^p. The x matrix is formed at dimension
/// size + p and the working dimension drops by one at every multiplication,
/// so truncation never reaches the retained block.
inline DenseMatrix build_power_matrix(const BasisSpec& spec, int p, int size) {
    if (p < 1) throw std::invalid_argument("build_power_matrix: p must be >= 1");
    if (size < 1) throw std::invalid_argument("build_power_matrix: size must be >= 1");
    const DenseMatrix x = build_x_matrix(spec, size + p);
    DenseMatrix power = x;
    int d = size + p;
    for (int k = 2; k <= p; ++k) {
        --d;
        power = detail::banded_product(power, k - 1, x, 1, d);
    }
    return power.leading_block(size);
}

} // namespace bandres
