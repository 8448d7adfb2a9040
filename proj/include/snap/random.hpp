#pragma once

#include <cstdint>
#include <random>

namespace snap {

/// SplitMix64 finalizer; used for seed derivation only.
std::uint64_t splitmix64(std::uint64_t x);

/**
 * Child seed for (base, a, b, c). Each coordinate is folded in with a
 * SplitMix64 round, so distinct tuples give decorrelated streams.
 */
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Substreams of one simulated instance.
enum class Stream : std::uint64_t { Design = 1, Coefficients = 2, Noise = 3 };

/// Inverse of the standard normal CDF on (0, 1).
double inverse_normal_cdf(double u);

/**
 * Deterministic generator: std::mt19937_64 (fully specified by the
 * standard) with hand-rolled variate transforms so streams do not depend
 * on the standard library's distribution implementations.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() { return inverse_normal_cdf(uniform_open()); }

    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound);

    /// +1 or -1 with probability 1/2.
    int coin() { return (engine_() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
};

}  // namespace snap
