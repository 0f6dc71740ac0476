#ifndef PDPROBE_ORACLE_HPP
#define PDPROBE_ORACLE_HPP

// Desk-scale ground truth. Nothing in this header uses the solver or
// power-iteration code it is meant to check.

#include "pdprobe/errors.hpp"
#include "pdprobe/operator.hpp"
#include "pdprobe/random_sphere.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace pdprobe {

///
/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, in
/// descending order. Sweeps until the off-diagonal Frobenius mass is at most
/// 1e-12 times the Frobenius norm of the input.
///
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jacobi_eigenvalues(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                                                            Eigen::Index cap = default_dense_cap)
{
    using std::abs;
    using std::sqrt;
    const Eigen::Index n = m.rows();
    if (m.cols() != n)
        throw DimensionError("jacobi_eigenvalues: matrix must be square");
    if (n > cap)
        throw DimensionError("jacobi_eigenvalues: dimension " + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap));

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = m;
    const Scalar target = Scalar(1e-12) * a.norm();
    auto off_norm = [&a, n]() {
        Scalar s = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = j + 1; i < n; ++i)
                s += 2 * a(i, j) * a(i, j);
        return sqrt(s);
    };

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > target; ++sweep)
    {
        for (Eigen::Index p = 0; p < n - 1; ++p)
        {
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                const Scalar apq = a(p, q);
                if (apq == Scalar(0))
                    continue;
                const Scalar tau = (a(q, q) - a(p, p)) / (2 * apq);
                const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) / (abs(tau) + sqrt(Scalar(1) + tau * tau));
                const Scalar c = Scalar(1) / sqrt(Scalar(1) + t * t);
                const Scalar s = t * c;
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = Scalar(0);
            }
        }
    }
    if (off_norm() > target)
        throw Error("jacobi_eigenvalues: no convergence");

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d = a.diagonal();
    std::sort(d.data(), d.data() + n, std::greater<Scalar>());
    return d;
}

struct GeneratedMatrix
{
    DenseSymmetricMatrix matrix;
    /// Descending.
    Vector true_spectrum;
    std::uint64_t seed = 0;

    double lambda_max() const { return true_spectrum(0); }
    double lambda_min() const { return true_spectrum(true_spectrum.size() - 1); }
    /// |lambda|_max / |lambda|_min.
    double condition_number() const;
    Index negative_count() const;
    bool positive_definite() const { return lambda_min() > 0.0; }
};

/// Haar-distributed orthogonal matrix: Q of a Gaussian matrix's QR with the
/// signs of R's diagonal folded in.
Matrix random_orthogonal(Index n, RngState& rng);

/// Q diag(spectrum) Q^T, symmetrized exactly.
GeneratedMatrix generate_with_spectrum(const Vector& spectrum, std::uint64_t seed);

/// SPD with log-uniform spectrum in [scale / cond, scale]; both endpoints are
/// always present so the condition number is exactly `cond` (n >= 2).
GeneratedMatrix generate_spd(Index n, double cond, std::uint64_t seed, double scale = 1.0);

enum class NegativeShape
{
    spread,       ///< negate randomly chosen eigenvalues of an SPD spectrum
    tiny_minimum, ///< shrink the negated part so lambda_min = -1e-6 * lambda_max
};

///
/// Indefinite matrix: the spectrum of generate_spd with `num_negative`
/// eigenvalues negated. With NegativeShape::tiny_minimum the negated
/// eigenvalues are shrunk so that lambda_min = -1e-6 * lambda_max (needs
/// n >= 2 and num_negative < n; the largest eigenvalue stays positive).
///
GeneratedMatrix generate_indefinite(Index n,
                                    double cond,
                                    std::uint64_t seed,
                                    Index num_negative,
                                    NegativeShape shape = NegativeShape::spread,
                                    double scale = 1.0);

}  // namespace pdprobe

#endif  // PDPROBE_ORACLE_HPP
