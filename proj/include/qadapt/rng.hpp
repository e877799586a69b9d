#pragma once

#include <cstdint>
#include <random>

namespace qadapt {

/// splitmix64 step; used to derive independent sub-streams from a base seed.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed for (seed, index). Parallel and serial evaluation
/// orders see identical streams.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    uint64_t s = seed;
    uint64_t a = splitmix64(s);
    s = a ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return splitmix64(s);
}

inline std::mt19937_64 substream(uint64_t seed, uint64_t index) {
    return std::mt19937_64(derive_seed(seed, index));
}

}  // namespace qadapt
