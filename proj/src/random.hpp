#pragma once

#include <cstdint>
#include <random>

namespace kmx::detail {

// Unbiased draw from [0, n) (Lemire's multiply-and-reject). Unlike
// std::uniform_int_distribution the result sequence is identical across
// standard library implementations.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(gen()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(gen()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace kmx::detail
