#include "mpv/lcg.hpp"

#include <stdexcept>

namespace mpv {

std::uint64_t Lcg64::next() {
    state_ = kMultiplier * state_ + kIncrement;
    return state_;
}

double Lcg64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Lcg64::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("Lcg64::uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>((next() >> 32) % span);
}

}  // namespace mpv
