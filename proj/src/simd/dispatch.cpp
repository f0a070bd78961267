#include <cstdlib>
#include <stdexcept>
#include <string>

#include "blx/simd/kernels.hpp"

namespace blx::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  return std::nullopt;
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(BLX_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(BLX_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("kernel variant not supported on this machine: " +
                                std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(BLX_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_kernels;
#endif
#if defined(BLX_HAVE_NEON)
    case Isa::neon: return detail::neon_kernels;
#endif
    default: return detail::scalar_kernels;
  }
}

namespace {

const Kernels& select_kernels() {
  if (const char* requested = std::getenv("BLX_KERNEL")) {
    const std::string_view name(requested);
    if (auto isa = parse_isa(name); isa && isa_supported(*isa)) return kernels_for(*isa);
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) return kernels_for(isa);
  }
  return detail::scalar_kernels;
}

}  // namespace

const Kernels& active_kernels() {
  static const Kernels& chosen = select_kernels();
  return chosen;
}

}  // namespace blx::simd
