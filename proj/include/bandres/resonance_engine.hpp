#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandres/banded_linalg.hpp"
#include "bandres/errors.hpp"
#include "bandres/hamiltonian.hpp"

namespace bandres {

struct IterationConfig {
    Complex e0{0.0, 0.0};
    int max_iters = 200;
    // Convergence threshold on |E_n - E_{n-1}|, relative to max(1, |E|).
    double tol = 1e-13;
    int reference_row = 1; // 1-based
    bool rayleigh_update = false;
    // On a degenerate reference row, move to the largest-magnitude row
    // instead of throwing ReferenceRowDegenerateError.
    bool auto_fallback = true;

    void validate(int dim) const {
        if (max_iters < 1) throw std::invalid_argument("IterationConfig: max_iters must be >= 1");
        if (!(tol > 0.0)) throw std::invalid_argument("IterationConfig: tol must be > 0");
        if (reference_row < 1 || reference_row > dim)
            throw std::invalid_argument("IterationConfig: reference_row " +
                                        std::to_string(reference_row) + " outside [1, " +
                                        std::to_string(dim) + "]");
        if (!std::isfinite(e0.real()) || !std::isfinite(e0.imag()))
            throw std::invalid_argument("IterationConfig: e0 must be finite");
    }
};

struct EigenResult {
    Complex energy;
    int iterations = 0;
    double residual = 0.0;
    ComplexVector eigencolumn; // eigencolumn[reference_row - 1] == 1
    int reference_row = 1;     // row actually used, 1-based
    bool converged = false;
};

// Entry magnitude, relative to the column maximum, below which a reference
// row is considered to carry no weight.
inline constexpr double kDegenerateRowRatio = 1e-12;

// Residual bound (relative to ||H||_inf) required before a result is
// reported as converged.
inline constexpr double kResidualFactor = 1e-8;

// With rayleigh_update, the shift stays at e0 for this many iterations. The
// first estimates from the all-ones start are poor and following them at
// once lets the iteration skip the levels nearest e0.
inline constexpr int kRayleighWarmup = 3;

/// Inverse iteration X(n+1) = (H - E)^{-1} X(n) from X(0) = ones.
///
/// After each solve the column is scaled so its reference-row entry is 1 and
/// the eigenvalue estimate is that row of H X. With rayleigh_update the shift
/// follows the latest estimate after kRayleighWarmup fixed-shift steps;
/// otherwise the single factorization at e0 is reused throughout.
inline EigenResult iterate(const BandedComplexSymmetric& m, const IterationConfig& cfg) {
    cfg.validate(m.dim());
    const int n = m.dim();
    const double residual_bound = kResidualFactor * std::max(1.0, m.inf_norm());

    BandFactorization factor = factor_shifted(m, cfg.e0);
    ComplexVector x(n, Complex(1.0, 0.0));
    int ref = cfg.reference_row - 1;
    Complex estimate = std::numeric_limits<double>::quiet_NaN();

    EigenResult result;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        x = factor.solve(x);
        const double xmax = inf_norm(x);
        if (!std::isfinite(xmax) || xmax == 0.0)
            throw NonConvergenceError("iterate: column lost finiteness at iteration " +
                                      std::to_string(it));
        if (std::abs(x[ref]) < kDegenerateRowRatio * xmax) {
            if (!cfg.auto_fallback) throw ReferenceRowDegenerateError(ref + 1);
            ref = static_cast<int>(std::max_element(x.begin(), x.end(),
                                                    [](const Complex& a, const Complex& b) {
                                                        return std::abs(a) < std::abs(b);
                                                    }) -
                                   x.begin());
            estimate = std::numeric_limits<double>::quiet_NaN();
        }
        const Complex scale = x[ref];
        for (Complex& v : x) v /= scale;
        x[ref] = Complex(1.0, 0.0);

        const Complex next = multiply_row(m, ref, x);
        const double change = std::abs(next - estimate);
        estimate = next;
        result.iterations = it;

        if (change < cfg.tol * std::max(1.0, std::abs(next))) {
            const double res = residual_norm(m, next, x);
            if (res <= residual_bound) {
                result.converged = true;
                break;
            }
        }
        if (cfg.rayleigh_update && it >= kRayleighWarmup && it < cfg.max_iters) {
            try {
                factor = factor_shifted(m, next);
            } catch (const SingularShiftError&) {
                // estimate is an eigenvalue to working precision; keep the old factors
            }
        }
    }

    result.energy = estimate;
    result.eigencolumn = std::move(x);
    result.reference_row = ref + 1;
    result.residual = residual_norm(m, result.energy, result.eigencolumn);
    return result;
}

struct ScanConfig {
    double e_min = 0.0;
    double e_max = 1.0;
    double de = 0.1;
    IterationConfig iteration;
    double dedupe_tol = 1e-9;
    int min_persistence = 2;
    bool parallel = false;

    void validate() const {
        if (!(e_min < e_max)) throw std::invalid_argument("ScanConfig: e_min must be < e_max");
        if (!(de > 0.0)) throw std::invalid_argument("ScanConfig: de must be > 0");
        if (de > e_max - e_min) throw std::invalid_argument("ScanConfig: de exceeds the scan range");
        if (!(dedupe_tol > 0.0)) throw std::invalid_argument("ScanConfig: dedupe_tol must be > 0");
        if (min_persistence < 1) throw std::invalid_argument("ScanConfig: min_persistence must be >= 1");
    }

    std::vector<double> grid() const {
        std::vector<double> g;
        const int steps = static_cast<int>(std::floor((e_max - e_min) / de + 1e-9));
        g.reserve(steps + 1);
        for (int i = 0; i <= steps; ++i) g.push_back(e_min + i * de);
        return g;
    }
};

// Outcome of a single grid point.
struct ScanStep {
    double e0 = 0.0;           // grid value
    Complex shift;             // shift actually factored (e0, nudged when singular)
    std::optional<EigenResult> result;
    std::string error;
};

struct ScanEigenvalue {
    EigenResult result;
    int persistence = 0; // longest run of consecutive grid steps reaching it
};

struct ScanReport {
    std::vector<ScanEigenvalue> eigenvalues; // sorted by (ER, EI)
    std::vector<ScanStep> steps;
};

namespace detail {

inline ScanStep scan_step(const BandedComplexSymmetric& m, const ScanConfig& cfg, double e) {
    ScanStep step;
    step.e0 = e;
    IterationConfig it = cfg.iteration;
    it.e0 = Complex(e, 0.0);
    // A singular factorization means the grid value sits on an eigenvalue;
    // nudge it by an awkward fraction of the step and retry.
    for (int attempt = 0; attempt < 3; ++attempt) {
        step.shift = it.e0;
        try {
            step.result = iterate(m, it);
            if (!step.result->converged) step.error = "not converged";
            return step;
        } catch (const SingularShiftError& ex) {
            step.error = ex.what();
            it.e0 += Complex(cfg.de / 17.0, 0.0);
        } catch (const std::exception& ex) {
            step.error = ex.what();
            return step;
        }
    }
    return step;
}

} // namespace detail

/// Runs iterate from every grid point and keeps eigenvalues that are reached
/// from at least min_persistence consecutive grid points.
inline ScanReport scan(const BandedComplexSymmetric& m, const ScanConfig& cfg) {
    cfg.validate();
    cfg.iteration.validate(m.dim());
    const std::vector<double> grid = cfg.grid();

    ScanReport report;
    report.steps.resize(grid.size());
    if (cfg.parallel) {
        std::vector<std::future<ScanStep>> jobs;
        jobs.reserve(grid.size());
        for (double e : grid)
            jobs.push_back(std::async(std::launch::async, [&m, &cfg, e] { return detail::scan_step(m, cfg, e); }));
        for (std::size_t i = 0; i < jobs.size(); ++i) report.steps[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) report.steps[i] = detail::scan_step(m, cfg, grid[i]);
    }

    struct Cluster {
        EigenResult best;
        int run = 0;
        int longest = 0;
        int last_step = -2;
    };
    std::vector<Cluster> clusters;
    for (int i = 0; i < static_cast<int>(report.steps.size()); ++i) {
        const ScanStep& step = report.steps[i];
        if (!step.result || !step.result->converged) continue;
        const EigenResult& r = *step.result;
        auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
            return std::abs(c.best.energy - r.energy) <= cfg.dedupe_tol;
        });
        if (it == clusters.end()) {
            clusters.push_back(Cluster{r, 0, 0, -2});
            it = std::prev(clusters.end());
        } else if (r.residual < it->best.residual) {
            it->best = r;
        }
        it->run = (it->last_step == i - 1) ? it->run + 1 : 1;
        it->last_step = i;
        it->longest = std::max(it->longest, it->run);
    }

    for (const Cluster& c : clusters)
        if (c.longest >= cfg.min_persistence) report.eigenvalues.push_back({c.best, c.longest});
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](const ScanEigenvalue& a, const ScanEigenvalue& b) {
                  if (a.result.energy.real() != b.result.energy.real())
                      return a.result.energy.real() < b.result.energy.real();
                  return a.result.energy.imag() < b.result.energy.imag();
              });
    return report;
}

struct SweepEntry {
    int dim = 0;
    ScanReport report;
};

/// Reassembles and rescans at each dimension.
inline std::vector<SweepEntry> dimension_sweep(const BasisSpec& spec, const PolynomialPotential& pot,
                                               const std::vector<int>& dims, const ScanConfig& cfg) {
    if (dims.empty()) throw std::invalid_argument("dimension_sweep: no dimensions given");
    if (!std::is_sorted(dims.begin(), dims.end()) ||
        std::adjacent_find(dims.begin(), dims.end()) != dims.end())
        throw std::invalid_argument("dimension_sweep: dimensions must be strictly ascending");
    std::vector<SweepEntry> out;
    out.reserve(dims.size());
    for (int d : dims) {
        BasisSpec s = spec;
        s.dim = d;
        out.push_back({d, scan(assemble(s, pot), cfg)});
    }
    return out;
}

struct RowCheck {
    int row = 0;
    std::optional<EigenResult> result;
    std::string error;
};

/// Repeats iterate with each reference row (no automatic fallback) so the
/// caller can compare the estimates.
inline std::vector<RowCheck> reference_row_check(const BandedComplexSymmetric& m, const IterationConfig& cfg,
                                                 const std::vector<int>& rows) {
    std::vector<RowCheck> out;
    out.reserve(rows.size());
    for (int row : rows) {
        if (row < 1 || row > m.dim())
            throw std::invalid_argument("reference_row_check: row " + std::to_string(row) + " out of range");
        IterationConfig c = cfg;
        c.reference_row = row;
        c.auto_fallback = false;
        RowCheck check{row, std::nullopt, {}};
        try {
            check.result = iterate(m, c);
        } catch (const ReferenceRowDegenerateError& ex) {
            check.error = ex.what();
        }
        out.push_back(std::move(check));
    }
    return out;
}

} // namespace bandres
