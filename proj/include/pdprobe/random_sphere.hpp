#ifndef PDPROBE_RANDOM_SPHERE_HPP
#define PDPROBE_RANDOM_SPHERE_HPP

#include "pdprobe/operator.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace pdprobe {

/// Seedable source of standard-normal variates.
///
/// The stream is pinned: a 64-bit Mersenne Twister (std::mt19937_64, whose
/// output sequence is fixed by the C++ standard) feeds 53-bit uniforms
/// u = (word >> 11) * 2^-53, which Marsaglia's polar method turns into pairs of
/// normals. The second normal of a pair is kept for the next request. Nothing
/// here depends on the standard library's distribution classes, so streams are
/// identical across compilers.
class RngState
{
public:
    explicit RngState(std::uint64_t seed);

    /// Seed drawn from std::random_device.
    static RngState from_entropy();

    std::uint64_t seed() const noexcept { return m_seed; }

    /// Uniform on [0, 1).
    double uniform();

    /// Standard normal.
    double normal();

private:
    std::uint64_t m_seed;
    std::mt19937_64 m_engine;
    std::optional<double> m_spare;
};

/// SplitMix64 mix of (seed, stream). Use it to give a generator and a
/// certifier run that share a user-facing seed unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniformly distributed point on the unit sphere of R^n, b = xi / |xi| with
/// xi standard normal. Consumes exactly n normals unless xi == 0, in which
/// case it draws again.
Vector sample_unit_sphere(RngState& rng, Index n);

}  // namespace pdprobe

#endif  // PDPROBE_RANDOM_SPHERE_HPP
