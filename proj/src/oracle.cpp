#include "pdprobe/oracle.hpp"

#include <Eigen/QR>

#include <numeric>
#include <vector>

namespace pdprobe {

double GeneratedMatrix::condition_number() const
{
    const Vector mags = true_spectrum.cwiseAbs();
    return mags.maxCoeff() / mags.minCoeff();
}

Index GeneratedMatrix::negative_count() const
{
    return (true_spectrum.array() < 0.0).count();
}

Matrix random_orthogonal(Index n, RngState& rng)
{
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0)
            q.col(j) = -q.col(j);
    return q;
}

namespace {

Vector sorted_descending(Vector v)
{
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return v;
}

// scale * cond^-t with t_0 = 0, t_{n-1} = 1 and interior t uniform.
Vector log_uniform_spectrum(Index n, double cond, double scale, RngState& rng)
{
    Vector spectrum(n);
    for (Index i = 0; i < n; ++i)
    {
        double t = rng.uniform();
        if (i == 0)
            t = 0.0;
        else if (i == n - 1)
            t = 1.0;
        spectrum(i) = scale * std::pow(cond, -t);
    }
    if (n == 1)
        spectrum(0) = scale;
    return spectrum;
}

GeneratedMatrix conjugate(const Vector& spectrum, std::uint64_t seed, RngState& rng)
{
    const Index n = spectrum.size();
    const Matrix q = random_orthogonal(n, rng);
    Matrix m = q * spectrum.asDiagonal() * q.transpose();
    const Matrix symmetric = 0.5 * (m + m.transpose());
    return GeneratedMatrix{DenseSymmetricMatrix(symmetric), sorted_descending(spectrum), seed};
}

}  // namespace

GeneratedMatrix generate_with_spectrum(const Vector& spectrum, std::uint64_t seed)
{
    if (spectrum.size() < 1 || !spectrum.allFinite())
        throw Error("generate_with_spectrum: spectrum must be finite and nonempty");
    RngState rng(seed);
    return conjugate(spectrum, seed, rng);
}

GeneratedMatrix generate_spd(Index n, double cond, std::uint64_t seed, double scale)
{
    if (n < 1 || !(cond >= 1.0) || !(scale > 0.0))
        throw Error("generate_spd: need n >= 1, cond >= 1 and scale > 0");
    RngState rng(seed);
    const Vector spectrum = log_uniform_spectrum(n, cond, scale, rng);
    return conjugate(spectrum, seed, rng);
}

GeneratedMatrix generate_indefinite(Index n,
                                    double cond,
                                    std::uint64_t seed,
                                    Index num_negative,
                                    NegativeShape shape,
                                    double scale)
{
    if (n < 1 || !(cond >= 1.0) || !(scale > 0.0))
        throw Error("generate_indefinite: need n >= 1, cond >= 1 and scale > 0");
    if (num_negative < 1 || num_negative > n)
        throw Error("generate_indefinite: need 1 <= num_negative <= n");
    if (shape == NegativeShape::tiny_minimum && (n < 2 || num_negative >= n))
        throw Error("generate_indefinite: tiny negative eigenvalue needs n >= 2 and a positive eigenvalue");

    RngState rng(seed);
    Vector spectrum = log_uniform_spectrum(n, cond, scale, rng);

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    // Fisher-Yates on the pinned stream, so the choice is reproducible.
    for (Index i = n - 1; i > 0; --i)
    {
        const auto j = static_cast<Index>(rng.uniform() * static_cast<double>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(std::min(j, i))]);
    }
    if (shape == NegativeShape::tiny_minimum)
    {
        // Keep index 0 (the largest) positive so lambda_max = scale.
        std::stable_partition(order.begin(), order.end(), [](Index i) { return i != 0; });
    }
    double largest_negated = 0.0;
    for (Index k = 0; k < num_negative; ++k)
        largest_negated = std::max(largest_negated, spectrum(order[static_cast<std::size_t>(k)]));
    const double factor = shape == NegativeShape::tiny_minimum ? 1e-6 * scale / largest_negated : 1.0;
    for (Index k = 0; k < num_negative; ++k)
        spectrum(order[static_cast<std::size_t>(k)]) *= -factor;

    return conjugate(spectrum, seed, rng);
}

}  // namespace pdprobe
