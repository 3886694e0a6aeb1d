#pragma once

#include <cstdint>
#include <random>

namespace cesaro {

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based split: the seed of child `index` depends only on (master, stream, index).
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

/// Uniform in the open interval (0,1) from a 64-bit hash value.
constexpr double unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

using Engine = std::mt19937_64;

inline double uniform_open(Engine& engine) { return unit_open(engine()); }

} // namespace cesaro
