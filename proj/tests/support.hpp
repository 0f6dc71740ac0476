#ifndef PDPROBE_TESTS_SUPPORT_HPP
#define PDPROBE_TESTS_SUPPORT_HPP

#include "pdprobe/operator.hpp"
#include "pdprobe/random_sphere.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <chrono>
#include <filesystem>
#include <functional>
#include <string>

namespace pdtest {

using namespace pdprobe;

/// Symmetric matrix with entries uniform in [-1, 1].
inline Matrix random_symmetric(Index n, std::uint64_t seed)
{
    RngState rng(seed);
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i)
            m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
    return m;
}

inline Vector random_vector(Index n, std::uint64_t seed)
{
    RngState rng(seed);
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = rng.normal();
    return v;
}

/// Well-conditioned SPD: B B^T / n + I.
inline Matrix random_spd(Index n, std::uint64_t seed)
{
    RngState rng(seed);
    Matrix b(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            b(i, j) = rng.normal();
    Matrix m = b * b.transpose() / static_cast<double>(n) + Matrix::Identity(n, n);
    return 0.5 * (m + m.transpose());
}

/// Eigen's self-adjoint solver, ascending.
inline Vector reference_eigenvalues(const Matrix& m)
{
    return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double rel_diff(const Vector& a, const Vector& b)
{
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

/// Fresh temp file path unique to this process.
inline std::filesystem::path temp_path(const std::string& name)
{
    static const auto dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("pdprobe_tests_" + std::to_string(std::hash<std::string>{}(std::to_string(
                                         std::chrono::steady_clock::now().time_since_epoch().count()))));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir / name;
}

}  // namespace pdtest

#endif  // PDPROBE_TESTS_SUPPORT_HPP
