#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bandres {

using Complex = std::complex<double>;

// Shift E coincides (numerically) with an eigenvalue: a zero pivot appeared.
class SingularShiftError : public std::runtime_error {
public:
    SingularShiftError(Complex shift, int pivot_row)
        : std::runtime_error("singular shift: pivot " + std::to_string(pivot_row) +
                             " vanished at E = (" + std::to_string(shift.real()) + ", " +
                             std::to_string(shift.imag()) + ")"),
          shift_(shift), pivot_row_(pivot_row) {}

    Complex shift() const noexcept { return shift_; }
    int pivot_row() const noexcept { return pivot_row_; }

private:
    Complex shift_;
    int pivot_row_;
};

// The reference row carries a negligible share of the eigencolumn.
class ReferenceRowDegenerateError : public std::runtime_error {
public:
    explicit ReferenceRowDegenerateError(int row)
        : std::runtime_error("reference row " + std::to_string(row) +
                             " is degenerate (eigencolumn entry ~ 0); choose another row"),
          row_(row) {}

    int row() const noexcept { return row_; }

private:
    int row_;
};

class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The +delta and -delta runs of an energy-shift probe landed on different eigenvalues.
class BranchJumpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bandres
