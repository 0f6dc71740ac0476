#ifndef PDPROBE_SPECTRUM_BOUNDS_HPP
#define PDPROBE_SPECTRUM_BOUNDS_HPP

#include "pdprobe/operator.hpp"
#include "pdprobe/random_sphere.hpp"
#include "pdprobe/shifted_solver.hpp"

#include <cstdint>

namespace pdprobe {

/// Interval (mu_lo, mu_hi) expected to contain |sigma(A)|.
struct SpectrumBounds
{
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    /// Rayleigh estimate of lambda_max(A^2).
    double lambda_tilde_1 = 0.0;
    /// Reciprocal of the Rayleigh estimate of lambda_max(A^-2), i.e. an
    /// estimate of lambda_min(A^2).
    double lambda_tilde_n = 0.0;
    /// Applications of A spent on the A^2 iteration.
    std::uint64_t forward_products = 0;
    /// Solves with A spent on the A^-2 iteration.
    std::uint64_t inverse_solves = 0;

    double ratio() const { return mu_hi / mu_lo; }
    bool encloses(double abs_lambda) const { return mu_lo < abs_lambda && abs_lambda < mu_hi; }
};

/// Builds the interval from the raw estimates: mu_lo = sqrt(0.5 lambda_n),
/// mu_hi = sqrt(1.5 lambda_1). Throws EstimationInconsistentError unless
/// 0 < mu_lo < mu_hi.
SpectrumBounds bounds_from_estimates(double lambda_tilde_1, double lambda_tilde_n);

///
/// Power iteration with k on A^-2 (two solves per pass) and then on A^2 (two
/// products per pass), each from a fresh sphere sample. Uses exactly
/// 2 (k + 1) solves and 2 (k + 1) products.
///
/// Throws SingularOperatorError if A cannot be inverted.
///
SpectrumBounds estimate_bounds(const SymmetricOperator& a, const SolveConfig& solver_cfg, RngState& rng, Index k);

}  // namespace pdprobe

#endif  // PDPROBE_SPECTRUM_BOUNDS_HPP
