#include "kmx/kernels.hpp"

#include <arm_neon.h>

#include <algorithm>

namespace kmx::kernels::neon {

std::uint64_t row_sum(const std::uint32_t* row, std::size_t n) noexcept {
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = vpadalq_u32(acc, vld1q_u32(row + i));
    std::uint64_t sum = vaddvq_u64(acc);
    for (; i < n; ++i) sum += row[i];
    return sum;
}

void nonzero_mask(const std::uint32_t* row, std::size_t n, std::uint64_t* mask) noexcept {
    std::fill_n(mask, mask_words(n), 0);
    const uint32x4_t weights = {1, 2, 4, 8};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t nz = vtstq_u32(vld1q_u32(row + i), vld1q_u32(row + i));
        const std::uint64_t bits = vaddvq_u32(vandq_u32(nz, weights));
        mask[i / 64] |= bits << (i % 64);
    }
    for (; i < n; ++i) {
        if (row[i] != 0) mask[i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

}  // namespace kmx::kernels::neon
