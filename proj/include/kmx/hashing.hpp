#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kmx {

/// Family of d affine hash functions h_r(x) = ((a_r*x + b_r) mod p) mod w
/// over the Mersenne prime p = 2^61 - 1. The family is pairwise independent
/// before the final reduction onto [0, w).
///
/// Immutable after construction; concurrent evaluation is safe.
class HashFamily {
public:
    static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

    struct Params {
        std::uint64_t a;  // in [1, p)
        std::uint64_t b;  // in [0, p)

        friend bool operator==(const Params&, const Params&) = default;
    };

    /// Draws d coefficient pairs from a generator seeded with `seed`.
    /// Throws ConfigError when d == 0 or w == 0.
    HashFamily(std::uint64_t seed, std::uint32_t depth, std::uint32_t width);

    /// Explicit coefficients, mostly for tests. Throws ConfigError on a == 0,
    /// coefficients >= p, an empty list or w == 0.
    HashFamily(std::vector<Params> params, std::uint32_t width);

    std::uint32_t depth() const noexcept { return static_cast<std::uint32_t>(params_.size()); }
    std::uint32_t width() const noexcept { return width_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const Params> params() const noexcept { return params_; }

    /// Bucket of `key` under function r. Throws std::out_of_range if r >= d.
    std::uint32_t bucket(std::uint32_t r, std::uint64_t key) const;

    std::uint32_t bucket_unchecked(std::uint32_t r, std::uint64_t key) const noexcept {
        const Params& p = params_[r];
        return static_cast<std::uint32_t>(mod_prime_affine(p.a, p.b, key) % width_);
    }

    friend bool operator==(const HashFamily&, const HashFamily&) = default;

    /// (x mod p) for any 64-bit x.
    static constexpr std::uint64_t reduce(std::uint64_t x) noexcept {
        std::uint64_t r = (x & kPrime) + (x >> 61);
        return r >= kPrime ? r - kPrime : r;
    }

    /// (a*x + b) mod p with a, b < p, without overflow.
    static std::uint64_t mod_prime_affine(std::uint64_t a, std::uint64_t b, std::uint64_t x) noexcept {
        const unsigned __int128 prod = static_cast<unsigned __int128>(a) * reduce(x) + b;
        // prod < 2^122 + 2^61; fold the high bits twice.
        const std::uint64_t lo = static_cast<std::uint64_t>(prod) & kPrime;
        const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
        return reduce(lo + reduce(hi));
    }

private:
    std::uint64_t seed_ = 0;
    std::uint32_t width_ = 0;
    std::vector<Params> params_;
};

/// Seeded family of `depth` functions onto [0, width).
HashFamily make_family(std::uint64_t seed, std::uint32_t depth, std::uint32_t width);

/// Mixes a base seed with a stream index (splitmix64 finalizer); used to give
/// independent sub-seeds to partitions and experiment phases.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace kmx
