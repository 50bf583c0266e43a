#pragma once

#include <cstdint>

namespace mpv {

/// 64-bit linear congruential generator x <- a x + c (mod 2^64).
/// Every randomized corpus is drawn from this so runs reproduce bit for bit.
class Lcg64 {
public:
    static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
    static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    std::uint64_t state() const { return state_; }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Integer in [lo, hi] from the top 32 bits.
    int uniform_int(int lo, int hi);

private:
    std::uint64_t state_;
};

}  // namespace mpv
