#pragma once

#include <cstdint>
#include <random>

namespace goalmodels {

// splitmix64; used to derive independent replicate seeds from a root seed
// so replicate loops give identical results at any worker count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `stream` replicate `index` under root seed `root`.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(root ^ splitmix64(stream)) ^ index);
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::uint64_t stream,
                                std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(root, stream, index));
}

}  // namespace goalmodels
