#pragma once

#include <cstdint>

namespace sasq {

// Derives an independent stream seed from (seed, salt); splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from a 64-bit draw.
inline double unit_double(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

}  // namespace sasq
