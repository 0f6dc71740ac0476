#ifndef PDPROBE_POWER_ITERATION_HPP
#define PDPROBE_POWER_ITERATION_HPP

#include "pdprobe/operator.hpp"

#include <vector>

namespace pdprobe {

struct PowerIterResult
{
    /// Rayleigh quotient of the last pass.
    double lambda_tilde = 0.0;
    /// Final normalized iterate.
    Vector b;
    /// Rayleigh quotient of every pass, in order.
    std::vector<double> history;
};

/// Iterations after which the Rayleigh estimate of an SPD operator of size n
/// is epsilon-relatively accurate with probability 1 - delta:
/// ceil(ln(n / delta^2) / (2 epsilon)), clamped to at least 1.
Index iteration_count(double epsilon, double delta, Index n);

/// Upper bound of iteration_count for epsilon = 0.4:
/// ceil(2.9 log10(n) + 5.76 log10(1 / delta)).
Index iteration_count_bound(double delta, Index n);

///
/// Plain power iteration with a Rayleigh estimate per pass.
///
/// Runs the passes j = 0, 1, ..., k (k + 1 applications of `op`): normalize,
/// apply, take the Rayleigh quotient. `b0` must be a unit vector.
///
/// Throws DegenerateStartError if an iterate vanishes and OverflowError on
/// non-finite values.
///
PowerIterResult power_iteration(const SymmetricOperator& op, const Vector& b0, Index k);

}  // namespace pdprobe

#endif  // PDPROBE_POWER_ITERATION_HPP
