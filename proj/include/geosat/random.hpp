#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace geosat
{
//---------------------------------------------------------------------------//
//! SplitMix64 step; used for seeding and for hashing stream coordinates.
inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

//---------------------------------------------------------------------------//
/*!
 * xoshiro256++ generator (Blackman & Vigna).
 *
 * Satisfies UniformRandomBitGenerator. All sampling in this library goes
 * through uniform01() and friends below rather than the standard
 * distributions, whose algorithms are implementation-defined; this keeps
 * Monte Carlo output identical across standard libraries.
 */
class Xoshiro256pp
{
  public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256pp(std::uint64_t seed = 0) noexcept
    {
        std::uint64_t sm = seed;
        for (auto& s : s_)
            s = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept
    {
        std::uint64_t const result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t const t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    std::array<std::uint64_t, 4> s_{};

    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }
};

//---------------------------------------------------------------------------//
/*!
 * Independent generator for one (seed, index) coordinate.
 *
 * Monte Carlo trials each draw from substream(seed, trial_index), so results
 * do not depend on how trials are split across worker threads.
 */
inline Xoshiro256pp substream(std::uint64_t seed, std::uint64_t index) noexcept
{
    std::uint64_t a = seed;
    std::uint64_t b = index ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t const key = splitmix64(a) ^ (splitmix64(b) * 0xd1342543de82ef95ULL);
    return Xoshiro256pp{key};
}

//! Uniform double in [0, 1) with 53 random bits.
template<class Rng>
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

//! Uniform double in (0, 1]; safe as a logarithm argument.
template<class Rng>
inline double uniform01_open_low(Rng& rng)
{
    return 1.0 - uniform01(rng);
}

//! Unit-rate exponential variate.
template<class Rng>
inline double exponential1(Rng& rng)
{
    return -std::log(uniform01_open_low(rng));
}

}  // namespace geosat
