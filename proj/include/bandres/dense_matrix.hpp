#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace bandres {

using Complex = std::complex<double>;

// Square row-major complex matrix. Only used for the small power-of-x
// building blocks and for densifying banded matrices in diagnostics.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

    int size() const noexcept { return n_; }

    Complex& operator()(int i, int j) {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }
    Complex operator()(int i, int j) const {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }

    // Leading m x m block.
    DenseMatrix leading_block(int m) const {
        assert(m <= n_);
        DenseMatrix out(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out(i, j) = (*this)(i, j);
        return out;
    }

    bool is_symmetric() const {
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    // Largest |i - j| with a nonzero entry.
    int bandwidth() const {
        int bw = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if ((*this)(i, j) != Complex{} && std::abs(i - j) > bw) bw = std::abs(i - j);
        return bw;
    }

    bool operator==(const DenseMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<Complex> data_;
};

} // namespace bandres
