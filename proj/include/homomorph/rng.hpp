#pragma once

#include <cstdint>
#include <random>

namespace homomorph {

/// Seedable generator with a platform-independent output sequence.
///
/// Wraps std::mt19937_64, whose raw stream is fixed by the standard, and
/// derives uniforms and normals by hand so results do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// SplitMix64 finalizer, used to derive independent per-trace seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace homomorph
