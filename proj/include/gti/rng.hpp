#pragma once

#include <cstdint>
#include <random>

namespace gti {

using Rng = std::mt19937_64;

// Independent stream for (seed, purpose, index). Used so that per-level work
// is reproducible regardless of the order it runs in.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

// Uniform integer in [0, bound).
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

namespace streams {
inline constexpr std::uint64_t louvain = 1;
inline constexpr std::uint64_t partition = 2;
inline constexpr std::uint64_t augment = 3;
inline constexpr std::uint64_t gan = 4;
inline constexpr std::uint64_t regenerate = 5;
inline constexpr std::uint64_t sampling = 6;
inline constexpr std::uint64_t ensemble = 7;
inline constexpr std::uint64_t stage_modularity = 8;
}  // namespace streams

}  // namespace gti
