#pragma once

#include <cstdint>
#include <string_view>

namespace ewgame {

/// Counter-based generator: the k-th draw of stream s under seed x is
/// mix64(key(x, s) + k * golden), with mix64 the SplitMix64 finalizer. Draws
/// depend only on (seed, stream, k), so streams can be handed to worker
/// threads in any order without changing results.
class CounterRng {
public:
    static constexpr std::string_view kAlgorithm = "splitmix64-ctr";
    /// Seed reserved for the acceptance suite.
    static constexpr std::uint64_t kAcceptanceSeed = 0;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace ewgame
