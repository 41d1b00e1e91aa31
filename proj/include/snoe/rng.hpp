#ifndef SNOE_RNG_HPP_
#define SNOE_RNG_HPP_

#include <cstdint>
#include <random>

namespace snoe {

// splitmix64 step; also used to fan a base seed out into per-stage streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    return splitmix64(s) ^ a;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    return std::mt19937_64(splitmix64(s));
}

}  // namespace snoe

#endif  // SNOE_RNG_HPP_
