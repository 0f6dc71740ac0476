#include "pdprobe/spectrum_bounds.hpp"

#include "pdprobe/errors.hpp"
#include "pdprobe/power_iteration.hpp"

#include <algorithm>
#include <cmath>

namespace pdprobe {

SpectrumBounds bounds_from_estimates(double lambda_tilde_1, double lambda_tilde_n)
{
    SpectrumBounds bounds;
    bounds.lambda_tilde_1 = lambda_tilde_1;
    bounds.lambda_tilde_n = lambda_tilde_n;
    bounds.mu_lo = std::sqrt(0.5 * lambda_tilde_n);
    bounds.mu_hi = std::sqrt(1.5 * lambda_tilde_1);
    if (!(bounds.mu_lo > 0.0 && bounds.mu_lo < bounds.mu_hi && std::isfinite(bounds.mu_hi)))
        throw EstimationInconsistentError("spectrum estimates do not form an interval mu_lo < mu_hi", lambda_tilde_1,
                                          lambda_tilde_n);
    return bounds;
}

SpectrumBounds estimate_bounds(const SymmetricOperator& a, const SolveConfig& solver_cfg, RngState& rng, Index k)
{
    if (k < 1)
        throw Error("estimate_bounds: k must be at least 1");
    const Index n = a.dim();
    ApplicationCounter products;
    ApplicationCounter solves;

    const SymmetricOperator inv_a = counted(inverse_operator(a, solver_cfg), solves);
    const Vector b_inv = sample_unit_sphere(rng, n);
    const double lambda_inv = power_iteration(squared(inv_a), b_inv, k).lambda_tilde;

    const SymmetricOperator fwd_a = counted(a, products);
    const Vector b_fwd = sample_unit_sphere(rng, n);
    const double lambda_1 = power_iteration(squared(fwd_a), b_fwd, k).lambda_tilde;

    SpectrumBounds bounds = bounds_from_estimates(lambda_1, 1.0 / lambda_inv);
    bounds.forward_products = products.value();
    bounds.inverse_solves = solves.value();
    return bounds;
}

}  // namespace pdprobe
