#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace modsamp {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and two coordinates (e.g. cell and trial).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept
{
    std::uint64_t h = mix64(base + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (a * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (b * 0xa0761d6478bd642fULL + 0xe7037ed1a0b428dbULL));
    return h;
}

/// Counter-based generator: draw i of stream s is a pure function of (seed, s, i),
/// so results do not depend on call order or thread scheduling.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_{derive_seed(seed, stream, 0x5eedULL)}
    {
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept
    {
        // Two rounds so adjacent counters and adjacent keys decorrelate.
        return mix64(mix64(key_ + counter * 0x9e3779b97f4a7c15ULL) ^ key_);
    }

    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t counter) const noexcept
    {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on the open interval (lo, hi).
    double uniform(std::uint64_t counter, double lo, double hi) const noexcept
    {
        return lo + (hi - lo) * uniform(counter);
    }

    /// Standard normal via Box-Muller on counters 2c and 2c+1.
    double normal(std::uint64_t counter) const noexcept
    {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
};

}  // namespace modsamp
