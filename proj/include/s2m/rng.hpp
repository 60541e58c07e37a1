#pragma once

#include <cstdint>

namespace s2m {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the n-th draw is mix64(key + (n + 1) * golden), with
/// key derived from (seed, case index, stream id). Streams never share state,
/// so any case can be regenerated alone. This scheme is part of the benchmark
/// format and must not change.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    CounterRng(std::uint64_t seed, std::uint64_t case_index, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed ^ mix64(case_index + kGolden)) + stream * kGolden))
    {
    }

    std::uint64_t next_u64() noexcept
    {
        ++counter_;
        return mix64(key_ + counter_ * kGolden);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [lo, hi], lo <= hi.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept
    {
        const std::uint64_t span = hi - lo + 1;
        auto offset = static_cast<std::uint64_t>(next_unit() * static_cast<double>(span));
        return lo + (offset < span ? offset : span - 1);
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace s2m
