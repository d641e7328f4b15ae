#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gld {

using Rng = std::mt19937_64;

// independent stream for (seed, tags...)
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed);
    for (auto t : tags) h = mix(h ^ mix(t));
    return Rng(h);
}

}  // namespace gld
