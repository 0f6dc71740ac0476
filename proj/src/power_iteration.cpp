#include "pdprobe/power_iteration.hpp"

#include "pdprobe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pdprobe {

Index iteration_count(double epsilon, double delta, Index n)
{
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) || n < 1)
        throw Error("iteration_count: epsilon and delta must lie in (0, 1) and n >= 1");
    // ln(n / delta^2) without forming delta^2, which underflows for tiny delta.
    const double value = (std::log(static_cast<double>(n)) - 2.0 * std::log(delta)) / (2.0 * epsilon);
    return std::max<Index>(1, static_cast<Index>(std::ceil(value)));
}

Index iteration_count_bound(double delta, Index n)
{
    if (!(delta > 0.0 && delta < 1.0) || n < 1)
        throw Error("iteration_count_bound: delta must lie in (0, 1) and n >= 1");
    const double value = 2.9 * std::log10(static_cast<double>(n)) + 5.76 * std::log10(1.0 / delta);
    return static_cast<Index>(std::ceil(value));
}

PowerIterResult power_iteration(const SymmetricOperator& op, const Vector& b0, Index k)
{
    if (k < 0)
        throw Error("power_iteration: negative iteration count");
    if (b0.size() != op.dim())
        throw DimensionError("power_iteration: start vector has wrong length");
    if (std::abs(b0.norm() - 1.0) > 1e-8)
        throw Error("power_iteration: start vector must have unit norm");

    PowerIterResult result;
    result.history.reserve(static_cast<std::size_t>(k) + 1);
    Vector v = b0;
    Vector b;
    for (Index j = 0; j <= k; ++j)
    {
        const double norm = v.norm();
        if (norm == 0.0)
            throw DegenerateStartError("power_iteration: iterate vanished at pass " + std::to_string(j));
        b = v / norm;
        v = matvec(op, b);
        result.lambda_tilde = v.dot(b) / b.dot(b);
        result.history.push_back(result.lambda_tilde);
    }
    if (!std::isfinite(result.lambda_tilde))
        throw OverflowError("power_iteration: non-finite Rayleigh quotient");
    result.b = std::move(b);
    return result;
}

}  // namespace pdprobe
