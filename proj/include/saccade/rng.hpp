#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace saccade {

// FNV-1a, used for seed derivation and output-file fingerprints.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a base seed and a purpose tag.
/// Every randomized operation owns one derived seed, so results never depend
/// on call order.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    return splitmix64(base ^ fnv1a64(tag));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace saccade
