#pragma once

#include <cstdint>
#include <random>

namespace cbwk {

// Stream generator used everywhere in the library. Per-run streams are
// derived with splitmix64 so that neighbouring seeds give unrelated streams.
inline constexpr const char* kRngName = "mt19937_64/splitmix64";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Child stream `index` of `seed`; children of one seed never share state.
inline Rng split_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace cbwk
