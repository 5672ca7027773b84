#include "kmx/hashing.hpp"

#include "kmx/error.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace kmx {

namespace {

// Uniform draw from [lo, p) by rejection on 61-bit words; mt19937_64 output is
// fully specified by the standard so families are reproducible everywhere.
std::uint64_t draw_below_prime(std::mt19937_64& gen, std::uint64_t lo) {
    for (;;) {
        const std::uint64_t x = gen() >> 3;
        if (x >= lo && x < HashFamily::kPrime) return x;
    }
}

}  // namespace

HashFamily::HashFamily(std::uint64_t seed, std::uint32_t depth, std::uint32_t width)
    : seed_(seed), width_(width) {
    if (depth == 0) throw ConfigError("hash family depth must be >= 1");
    if (width == 0) throw ConfigError("hash family width must be >= 1");
    std::mt19937_64 gen(seed);
    params_.reserve(depth);
    for (std::uint32_t r = 0; r < depth; ++r) {
        const std::uint64_t a = draw_below_prime(gen, 1);
        const std::uint64_t b = draw_below_prime(gen, 0);
        params_.push_back({a, b});
    }
}

HashFamily::HashFamily(std::vector<Params> params, std::uint32_t width)
    : width_(width), params_(std::move(params)) {
    if (params_.empty()) throw ConfigError("hash family depth must be >= 1");
    if (width == 0) throw ConfigError("hash family width must be >= 1");
    for (const Params& p : params_) {
        if (p.a == 0) throw ConfigError("hash coefficient a must be nonzero");
        if (p.a >= kPrime || p.b >= kPrime) throw ConfigError("hash coefficients must be below p");
    }
}

std::uint32_t HashFamily::bucket(std::uint32_t r, std::uint64_t key) const {
    if (r >= params_.size()) {
        throw std::out_of_range("hash function index " + std::to_string(r) + " >= depth " +
                                std::to_string(params_.size()));
    }
    return bucket_unchecked(r, key);
}

HashFamily make_family(std::uint64_t seed, std::uint32_t depth, std::uint32_t width) {
    return HashFamily(seed, depth, width);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace kmx
