#pragma once

#include <cstdint>
#include <random>

namespace glyco {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for trial `index` derived from a master seed. Depends only on the
/// pair, so extending the trial count keeps earlier trials unchanged.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

using Engine = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; portable across standard libraries
/// unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (Engine::max() / bound);
    std::uint64_t r;
    do {
        r = eng();
    } while (r >= limit);
    return r % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace glyco
