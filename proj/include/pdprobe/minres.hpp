#ifndef PDPROBE_MINRES_HPP
#define PDPROBE_MINRES_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdprobe {

struct MinresResult
{
    Eigen::Index iterations = 0;
    /// Lanczos estimate of the residual norm, relative to |b|.
    double estimated_relative_residual = 0.0;
    /// Running estimate of the operator 2-norm.
    double operator_norm = 0.0;
    /// The Lanczos recurrence terminated (beta == 0) before convergence.
    bool breakdown = false;
};

///
/// Unpreconditioned MINRES (Paige & Saunders) for symmetric, possibly
/// indefinite A. Starts from x = 0, stops once the estimated residual norm
/// drops below `tol * |b|` or after `max_iterations` steps.
///
/// `apply(v)` must return A v.
///
template <typename Scalar, typename Apply>
MinresResult minres(const Apply& apply,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                    Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                    Scalar tol,
                    Eigen::Index max_iterations)
{
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = b.size();
    MinresResult result;
    x = VectorType::Zero(n);

    const Scalar beta1 = b.norm();
    if (beta1 == Scalar(0))
        return result;

    VectorType r1 = b, r2 = b, y = b;
    VectorType w = VectorType::Zero(n), w1(n), w2 = VectorType::Zero(n);
    Scalar oldb = 0, beta = beta1, dbar = 0, epsln = 0, phibar = beta1;
    Scalar cs = -1, sn = 0;
    Scalar anorm = 0;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();

    for (Eigen::Index itn = 1; itn <= max_iterations; ++itn)
    {
        const VectorType v = y / beta;
        y = apply(v);
        if (itn >= 2)
            y -= (beta / oldb) * r1;
        const Scalar alfa = v.dot(y);
        y -= (alfa / beta) * r2;
        r1 = r2;
        r2 = y;
        oldb = beta;
        beta = r2.norm();
        anorm = std::max(anorm, std::sqrt(alfa * alfa + beta * beta + oldb * oldb));

        // Apply the previous rotation, then compute and apply the new one.
        const Scalar oldeps = epsln;
        const Scalar delta = cs * dbar + sn * alfa;
        const Scalar gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        Scalar gamma = std::hypot(gbar, beta);
        gamma = std::max(gamma, eps * std::max(anorm, Scalar(1)));
        cs = gbar / gamma;
        sn = beta / gamma;
        const Scalar phi = cs * phibar;
        phibar = sn * phibar;

        w1 = w2;
        w2 = w;
        w = (v - oldeps * w1 - delta * w2) / gamma;
        x += phi * w;

        result.iterations = itn;
        result.estimated_relative_residual = static_cast<double>(std::abs(phibar) / beta1);
        result.operator_norm = static_cast<double>(anorm);

        if (std::abs(phibar) <= tol * beta1)
            break;
        if (beta <= eps * anorm)
        {
            result.breakdown = true;
            break;
        }
    }
    return result;
}

}  // namespace pdprobe

#endif  // PDPROBE_MINRES_HPP
