#include "kmx/kernels.hpp"

#include <algorithm>

namespace kmx::kernels::scalar {

std::uint64_t row_sum(const std::uint32_t* row, std::size_t n) noexcept {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += row[i];
    return sum;
}

void nonzero_mask(const std::uint32_t* row, std::size_t n, std::uint64_t* mask) noexcept {
    std::fill_n(mask, mask_words(n), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (row[i] != 0) mask[i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

}  // namespace kmx::kernels::scalar
