#ifndef SACERT_RNG_HPP
#define SACERT_RNG_HPP

#include <cstdint>
#include <random>

namespace sacert {

// splitmix64; used to derive independent streams from a single 64-bit seed
// by counter so that parallel runs reproduce serial runs.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(seed ^ splitmix64(counter));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t counter = 0) {
    return std::mt19937_64(derive_seed(seed, counter));
}

}  // namespace sacert

#endif
