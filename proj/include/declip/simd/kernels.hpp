#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace declip::simd {

using cplx = std::complex<double>;

// Inner loops shared by the PHY and the recovery code. Every entry has a
// scalar reference implementation; vector variants must agree with it to
// rounding (reassociated sums) and are selected once at startup.
struct KernelTable {
  std::string_view name;
  // sum_i conj(a[i]) * b[i]
  cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);
  // out[i] = |x[i]| computed as sqrt(re^2 + im^2)
  void (*magnitude)(const cplx* x, double* out, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*mul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // out[i] = a[i] / b[i]
  void (*div)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // out[i] = w[i] * x[i] for real w
  void (*scale_real)(const double* w, const cplx* x, cplx* out, std::size_t n);
  // out[i] = a[i] - b[i]
  void (*sub)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

// Active table. Defaults to the widest supported variant; the environment
// variable DECLIP_SIMD=scalar forces the reference path.
const KernelTable& kernels() noexcept;

}  // namespace declip::simd
