#include "kmx/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace kmx::kernels {

namespace {

struct Table {
    Isa isa;
    std::uint64_t (*row_sum)(const std::uint32_t*, std::size_t) noexcept;
    void (*nonzero_mask)(const std::uint32_t*, std::size_t, std::uint64_t*) noexcept;
};

bool force_scalar() noexcept {
    const char* v = std::getenv("KMX_FORCE_SCALAR");
    return v != nullptr && *v != '\0' && std::strcmp(v, "0") != 0;
}

Table select() noexcept {
    if (!force_scalar()) {
#if defined(KMX_HAVE_AVX2)
        if (isa_available(Isa::avx2)) return {Isa::avx2, &avx2::row_sum, &avx2::nonzero_mask};
#endif
#if defined(KMX_HAVE_NEON)
        if (isa_available(Isa::neon)) return {Isa::neon, &neon::row_sum, &neon::nonzero_mask};
#endif
    }
    return {Isa::scalar, &scalar::row_sum, &scalar::nonzero_mask};
}

const Table& table() noexcept {
    static const Table t = select();
    return t;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        case Isa::scalar: break;
    }
    return "scalar";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(KMX_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(KMX_HAVE_NEON)
            return true;  // mandatory on AArch64
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept { return table().isa; }

std::uint64_t row_sum(std::span<const std::uint32_t> row) noexcept {
    return table().row_sum(row.data(), row.size());
}

void nonzero_mask(std::span<const std::uint32_t> row, std::span<std::uint64_t> mask) noexcept {
    table().nonzero_mask(row.data(), row.size(), mask.data());
}

}  // namespace kmx::kernels
