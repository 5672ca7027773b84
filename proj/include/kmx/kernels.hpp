#pragma once

// Data-parallel inner loops over sketch counter rows.
//
// Each kernel has a scalar reference implementation and vector variants
// (AVX2 on x86-64, NEON on AArch64). The dispatching entry points pick the
// widest variant the running CPU supports on first use; KMX_FORCE_SCALAR=1 in
// the environment pins the scalar path. All variants produce bit-identical
// results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace kmx::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Whether this build contains, and this CPU can run, the given variant.
bool isa_available(Isa isa) noexcept;

/// Variant selected by the dispatcher.
Isa active_isa() noexcept;

/// Number of 64-bit words needed for an n-bit mask.
constexpr std::size_t mask_words(std::size_t n) noexcept { return (n + 63) / 64; }

/// Sum of a counter row, widened to 64 bits.
std::uint64_t row_sum(std::span<const std::uint32_t> row) noexcept;

/// Sets bit c of `mask` iff row[c] != 0; bits at and past row.size() are
/// cleared. `mask` must hold at least mask_words(row.size()) words.
void nonzero_mask(std::span<const std::uint32_t> row, std::span<std::uint64_t> mask) noexcept;

// Per-variant entry points, exposed for equivalence tests and benchmarks.
// Calling a variant for which isa_available() is false is undefined.
namespace scalar {
std::uint64_t row_sum(const std::uint32_t* row, std::size_t n) noexcept;
void nonzero_mask(const std::uint32_t* row, std::size_t n, std::uint64_t* mask) noexcept;
}  // namespace scalar

namespace avx2 {
std::uint64_t row_sum(const std::uint32_t* row, std::size_t n) noexcept;
void nonzero_mask(const std::uint32_t* row, std::size_t n, std::uint64_t* mask) noexcept;
}  // namespace avx2

namespace neon {
std::uint64_t row_sum(const std::uint32_t* row, std::size_t n) noexcept;
void nonzero_mask(const std::uint32_t* row, std::size_t n, std::uint64_t* mask) noexcept;
}  // namespace neon

}  // namespace kmx::kernels
