#include "pdprobe/random_sphere.hpp"

#include "pdprobe/errors.hpp"

#include <cmath>

namespace pdprobe {

RngState::RngState(std::uint64_t seed) :
    m_seed(seed), m_engine(seed)
{}

RngState RngState::from_entropy()
{
    std::random_device rd;
    const std::uint64_t hi = rd();
    const std::uint64_t lo = rd();
    return RngState((hi << 32) ^ lo);
}

double RngState::uniform()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double RngState::normal()
{
    if (m_spare)
    {
        const double z = *m_spare;
        m_spare.reset();
        return z;
    }
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    m_spare = v * f;
    return u * f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Vector sample_unit_sphere(RngState& rng, Index n)
{
    if (n < 1)
        throw DimensionError("sample_unit_sphere: dimension must be positive");
    Vector xi(n);
    double norm = 0.0;
    do
    {
        for (Index i = 0; i < n; ++i)
            xi(i) = rng.normal();
        norm = xi.norm();
    } while (norm == 0.0);
    return xi / norm;
}

}  // namespace pdprobe
