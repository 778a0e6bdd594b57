#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace textrojan::rng {

// SplitMix64 finalizer; stable across platforms and independent of any
// standard-library distribution internals.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stateless mixer used for per-(seed, record, position) choices so results do
// not depend on processing order or worker count.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

// Maps a 64-bit value into [0, n) via 128-bit multiply (Lemire reduction).
inline std::size_t bounded(std::uint64_t value, std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(value) * n) >> 64);
}

// Unbiased bounded draw from an engine, rejection-sampled; avoids
// std::uniform_int_distribution whose output is implementation-defined.
inline std::size_t uniform_index(std::mt19937_64& eng, std::size_t n) {
    const std::uint64_t limit = ~0ULL - (~0ULL % n + 1) % n;
    std::uint64_t v;
    do {
        v = eng();
    } while (v > limit);
    return static_cast<std::size_t>(v % n);
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& eng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(eng, i)]);
    }
}

}  // namespace textrojan::rng
