#pragma once

// Deterministic randomness. Everything derives from one root seed; helpers
// give independent child streams so per-level work is schedule-independent.
// Shuffles avoid std::uniform_int_distribution, whose output is not pinned by
// the standard, so dumps are bit-identical across platforms.

#include <cstdint>
#include <random>
#include <vector>

namespace chainlat {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 child_rng(std::uint64_t root_seed, std::uint64_t stream_id) {
    return std::mt19937_64(splitmix64(splitmix64(root_seed) ^ stream_id));
}

// Unbiased draw from [0, bound) by rejection.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    for (;;) {
        std::uint64_t v = rng();
        if (v <= limit) return v % bound;
    }
}

template <class T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[bounded_draw(rng, i)]);
}

} // namespace chainlat
