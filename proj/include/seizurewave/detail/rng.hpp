#pragma once

#include <cstdint>
#include <random>

namespace seizurewave::detail {

// std::mt19937_64 output is fully specified by the standard, so models and
// fixtures reproduce bit-for-bit across platforms. The distribution mappings
// below are spelled out for the same reason: std::uniform_*_distribution is
// implementation-defined.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent per-task stream derived from one master seed.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(splitmix64(splitmix64(master_seed) ^ (stream_id + 1)));
}

/// Uniform double in [0, 1), 53-bit resolution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection (bound > 0).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Standard normal via Box-Muller (one value per call; the sibling is dropped
/// to keep per-stream consumption independent of call pairing).
inline double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace seizurewave::detail
