#pragma once

// Reproducible random streams. Every shot or site gets its own generator
// seeded from (run seed, stream, index) through SplitMix64, so results do not
// depend on evaluation order. Distribution transforms are written out
// explicitly to keep draws identical across standard-library versions.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

namespace ramanforge::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return Engine(derive_seed(seed, stream, index));
}

// Uniform on the open interval (0, 1) with 53-bit resolution.
inline double uniform_open(Engine& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal quantile.
inline double normal_quantile(double u) {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

// Random permutation of 0..n-1 (Fisher-Yates with explicit index draws).
inline std::vector<std::size_t> permutation(std::size_t n, Engine& engine) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_open(engine) * static_cast<double>(i));
        std::swap(p[i - 1], p[std::min(j, i - 1)]);
    }
    return p;
}

}  // namespace ramanforge::rng
