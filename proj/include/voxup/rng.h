// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace voxup {

/// One splitmix64 output for input state `x` (state advanced by the golden
/// gamma before mixing).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Platform-independent seeded generator. Every random draw in the toolkit
/// goes through this so results depend only on the seed.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : mState(seed) {}

    constexpr std::uint64_t next() {
        const std::uint64_t out = splitmix64(mState);
        mState += 0x9e3779b97f4a7c15ULL;
        return out;
    }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double nextDouble() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * nextDouble(); }

    /// Uniform in [0, n) by rejection, n > 0.
    constexpr std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next();
        while (v >= limit)
            v = next();
        return v % n;
    }

private:
    std::uint64_t mState;
};

} // namespace voxup
