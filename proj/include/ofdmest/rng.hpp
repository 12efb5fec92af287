// SPDX-License-Identifier: Apache-2.0
//
// Counter-based seeded randomness. Everything stochastic in the library
// flows through SplitMix64 streams derived from explicit 64-bit seeds, so a
// run is reproducible bit-for-bit regardless of platform STL or thread
// scheduling.

#pragma once

#include <cmath>
#include <cstdint>

#include "ofdmest/num/types.hpp"

namespace ofdmest::rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic seed derivation: fold stream/index labels into a base seed.
inline std::uint64_t derive(std::uint64_t seed) { return mix64(seed); }

template <typename... Rest>
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t head, Rest... rest) {
    return derive(mix64(seed ^ mix64(head)), rest...);
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1] (safe under log).
    double uniform_pos() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }

    /// Standard circular complex Gaussian CN(0, 1): E|z|^2 = 1.
    num::cplx randn_c() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double phi = 2.0 * num::kPi * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Real standard normal.
    double randn() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        return r * std::cos(2.0 * num::kPi * uniform());
    }

  private:
    std::uint64_t state_;
};

} // namespace ofdmest::rng
