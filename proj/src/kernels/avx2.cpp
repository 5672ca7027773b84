// Compiled with -mavx2; only reached after a runtime CPU check.
#include "kmx/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace kmx::kernels::avx2 {

std::uint64_t row_sum(const std::uint32_t* row, std::size_t n) noexcept {
    __m256i acc_lo = _mm256_setzero_si256();
    __m256i acc_hi = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
        acc_lo = _mm256_add_epi64(acc_lo, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(v)));
        acc_hi = _mm256_add_epi64(acc_hi, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(v, 1)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), _mm256_add_epi64(acc_lo, acc_hi));
    std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) sum += row[i];
    return sum;
}

void nonzero_mask(const std::uint32_t* row, std::size_t n, std::uint64_t* mask) noexcept {
    std::fill_n(mask, mask_words(n), 0);
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
        const __m256i eq = _mm256_cmpeq_epi32(v, zero);
        const auto zero_bits = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq)));
        const std::uint64_t bits = ~zero_bits & 0xffu;
        // i is a multiple of 8, so the 8 bits never straddle a word.
        mask[i / 64] |= bits << (i % 64);
    }
    for (; i < n; ++i) {
        if (row[i] != 0) mask[i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

}  // namespace kmx::kernels::avx2
