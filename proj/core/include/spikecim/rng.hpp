// SPDX-License-Identifier: Apache-2.0
//
// Self-contained deterministic RNG (splitmix64).  Used for all seeded spike
// and weight generation so that results are reproducible across standard
// library implementations; std::mt19937 distributions are not portable.
#pragma once

#include <cstdint>

namespace spikecim {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // Uniform integer in [lo, hi] inclusive (Lemire reduction).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const auto wide = static_cast<unsigned __int128>(next()) * span;
        return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
    }

  private:
    std::uint64_t state_;
};

}  // namespace spikecim
