#pragma once

#include <cstdint>

namespace leapclust {

/// Counter-based SplitMix64 stream.
///
/// Output k of stream (seed) is splitmix64_mix(seed + (k + 1) * 0x9E3779B97F4A7C15), so any
/// draw can be recomputed from (seed, counter) alone. Normal variates use the Box-Muller
/// transform on two consecutive uniforms; both outputs of a pair are used.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1].
    double uniform_open0() noexcept { return 1.0 - uniform(); }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept;
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept;

    std::uint64_t counter() const noexcept { return counter_; }
    /// Deterministic child seed, used for per-trial and per-restart streams.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

}  // namespace leapclust
