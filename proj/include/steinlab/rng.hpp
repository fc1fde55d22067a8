#pragma once

#include <cstdint>
#include <limits>

namespace steinlab {

/// SplitMix64 (Steele, Lea, Flood 2014). 64-bit state, period 2^64.
///
/// Streams for parallel or per-row work are derived with `split`, which
/// hashes (master seed, stream index) through the SplitMix64 finalizer:
///
///     child.state = mix64(master + (stream + 1) * 0x9E3779B97F4A7C15)
///
/// The generator satisfies UniformRandomBitGenerator, but library samplers
/// only use `uniform()` / `uniform_open()` so draws do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    constexpr double uniform_open() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    static constexpr Rng split(std::uint64_t master, std::uint64_t stream) noexcept {
        return Rng(mix64(master + (stream + 1) * kGolden));
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t state_;
};

}  // namespace steinlab
