#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandres/errors.hpp"
#include "bandres/hamiltonian.hpp"
#include "bandres/resonance_engine.hpp"

namespace bandres {

// Probe for <x^power>: the monomial delta * x^power is added to and
// subtracted from the potential.
struct ShiftProbe {
    int power = 2;
    double delta = 5e-5;

    void validate() const {
        if (power < 1 || power > kMaxDegree)
            throw std::invalid_argument("ShiftProbe: power must lie in [1, " + std::to_string(kMaxDegree) + "]");
        if (!(delta > 0.0)) throw std::invalid_argument("ShiftProbe: delta must be > 0");
    }
};

namespace detail {

inline EigenResult converged_or_throw(const BandedComplexSymmetric& m, const IterationConfig& cfg,
                                      const char* what) {
    EigenResult r = iterate(m, cfg);
    if (!r.converged)
        throw NonConvergenceError(std::string(what) + ": inverse iteration did not converge in " +
                                  std::to_string(cfg.max_iters) + " iterations");
    return r;
}

// Perturbed runs are seeded at a converged eigenvalue. A perturbation that
// leaves the diagonal alone (odd power, exactly solvable level) can make that
// seed an exact eigenvalue of the perturbed matrix too, so retry once just off it.
inline EigenResult seeded_or_throw(const BandedComplexSymmetric& m, const IterationConfig& cfg, const char* what) {
    try {
        return converged_or_throw(m, cfg, what);
    } catch (const SingularShiftError&) {
        IterationConfig off = cfg;
        off.e0 += 1e-7 * std::max(1.0, std::abs(cfg.e0));
        return converged_or_throw(m, off, what);
    }
}

} // namespace detail

/// <x^m> = dE/dc_m by central difference, [E(+delta) - E(-delta)] / (2 delta).
///
/// The unperturbed eigenvalue reached from cfg.e0 seeds both perturbed runs.
inline Complex expectation_by_shift(const BasisSpec& spec, const PolynomialPotential& pot,
                                    const ShiftProbe& probe, const IterationConfig& cfg) {
    probe.validate();
    const EigenResult base = detail::converged_or_throw(assemble(spec, pot), cfg, "expectation_by_shift");

    IterationConfig seeded = cfg;
    seeded.e0 = base.energy;
    auto perturbed = [&](double sign) {
        PolynomialPotential p = pot;
        p.add_term(probe.power, Complex(sign * probe.delta, 0.0));
        return detail::seeded_or_throw(assemble(spec, p), seeded, "expectation_by_shift").energy;
    };
    const Complex up = perturbed(+1.0);
    const Complex down = perturbed(-1.0);

    const double bound = 10.0 * probe.delta * spec.dim;
    if (std::abs(up - down) > bound)
        throw BranchJumpError("expectation_by_shift: perturbed energies differ by " +
                              std::to_string(std::abs(up - down)) + " (> " + std::to_string(bound) +
                              "); the +delta and -delta runs followed different levels");
    return (up - down) / (2.0 * probe.delta);
}

struct QuadraticResponse {
    Complex e0;          // fitted E(0)
    Complex coefficient; // c in E(beta) = E(0) + c beta^2 + d beta^4
    Complex quartic;     // d, zero when the samples cannot resolve it
    std::vector<double> betas;   // sampled values, beta = 0 first
    std::vector<Complex> samples;
};

/// Fits E(beta) = E0 + c beta^2 (+ d beta^4) by least squares, where the
/// potential is pot + beta x^power and beta = 0 is always sampled. Meant for
/// levels whose first-order response vanishes. The quartic term is fitted
/// whenever the samples contain at least three distinct beta^2 values.
inline QuadraticResponse quadratic_response(const BasisSpec& spec, const PolynomialPotential& pot, int power,
                                            std::span<const double> betas, const IterationConfig& cfg) {
    if (betas.empty()) throw std::invalid_argument("quadratic_response: no beta values");
    ShiftProbe{power, 1.0}.validate();
    const EigenResult base = detail::converged_or_throw(assemble(spec, pot), cfg, "quadratic_response");
    IterationConfig seeded = cfg;
    seeded.e0 = base.energy;

    QuadraticResponse out;
    out.betas.push_back(0.0);
    out.samples.push_back(base.energy);
    for (double beta : betas) {
        if (beta == 0.0) continue;
        PolynomialPotential p = pot;
        p.add_term(power, Complex(beta, 0.0));
        out.betas.push_back(beta);
        out.samples.push_back(
            detail::seeded_or_throw(assemble(spec, p), seeded, "quadratic_response").energy);
    }

    std::vector<double> squares;
    for (double b : out.betas)
        if (std::find(squares.begin(), squares.end(), b * b) == squares.end()) squares.push_back(b * b);
    if (squares.size() < 2)
        throw std::invalid_argument("quadratic_response: beta values do not determine a quadratic");
    const int terms = squares.size() >= 3 ? 3 : 2;

    // Normal equations in the basis {1, u^2, u^4}, u = beta / max|beta|.
    double scale = 0.0;
    for (double b : out.betas) scale = std::max(scale, std::abs(b));
    double a[3][3] = {};
    Complex rhs[3] = {};
    for (std::size_t s = 0; s < out.betas.size(); ++s) {
        const double u = out.betas[s] / scale;
        const double b2 = u * u;
        const double basis[3] = {1.0, b2, b2 * b2};
        for (int i = 0; i < terms; ++i) {
            rhs[i] += basis[i] * out.samples[s];
            for (int j = 0; j < terms; ++j) a[i][j] += basis[i] * basis[j];
        }
    }
    for (int k = 0; k < terms; ++k) {
        for (int i = k + 1; i < terms; ++i) {
            const double m = a[i][k] / a[k][k];
            for (int j = k; j < terms; ++j) a[i][j] -= m * a[k][j];
            rhs[i] -= m * rhs[k];
        }
    }
    Complex coef[3] = {};
    for (int k = terms - 1; k >= 0; --k) {
        Complex s = rhs[k];
        for (int j = k + 1; j < terms; ++j) s -= a[k][j] * coef[j];
        coef[k] = s / a[k][k];
    }
    out.e0 = coef[0];
    out.coefficient = coef[1] / (scale * scale);
    out.quartic = coef[2] / (scale * scale * scale * scale);
    return out;
}

} // namespace bandres
