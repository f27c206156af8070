#include <cstdlib>
#include <string_view>

#include "declip/simd/kernels.hpp"

namespace declip::simd {

const KernelTable* avx2_kernels_unchecked() noexcept;

const KernelTable* avx2_kernels() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() noexcept {
  static const KernelTable& active = []() -> const KernelTable& {
    const char* forced = std::getenv("DECLIP_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return active;
}

}  // namespace declip::simd
