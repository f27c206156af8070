#include <cmath>

#include "declip/simd/kernels.hpp"

namespace declip::simd {
namespace {

// Products are written out explicitly so the reference path matches the
// vector variants term for term instead of going through __muldc3.

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void magnitude(const cplx* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = x[i].real(), q = x[i].imag();
    out[i] = std::sqrt(r * r + q * q);
  }
}

void mul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

void div(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double d = br * br + bi * bi;
    out[i] = {(ar * br + ai * bi) / d, (ai * br - ar * bi) / d};
  }
}

void scale_real(const double* w, const cplx* x, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = {w[i] * x[i].real(), w[i] * x[i].imag()};
}

void sub(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", dot_conj, magnitude, mul, div, scale_real, sub};
  return table;
}

}  // namespace declip::simd
