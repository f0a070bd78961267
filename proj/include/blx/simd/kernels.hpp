#pragma once

// Reduction kernels behind the operator loops. Every variant computes the
// same mathematical quantity; only the association order of the additions
// differs. The scalar variant adds strictly left to right, which is the
// reference order the rest of the library documents.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace blx::simd {

enum class Isa { scalar, avx2, neon };

struct Kernels {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

std::string_view isa_name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

// True when the variant was compiled in and the running CPU can execute it.
bool isa_supported(Isa isa) noexcept;

// Throws std::invalid_argument for variants that are not supported here.
const Kernels& kernels_for(Isa isa);

// Chosen once per process: BLX_KERNEL (scalar|avx2|neon|auto) when set and
// supported, otherwise the widest supported variant.
const Kernels& active_kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

namespace detail {
extern const Kernels scalar_kernels;
#if defined(BLX_HAVE_AVX2)
extern const Kernels avx2_kernels;
#endif
#if defined(BLX_HAVE_NEON)
extern const Kernels neon_kernels;
#endif
}  // namespace detail

}  // namespace blx::simd
