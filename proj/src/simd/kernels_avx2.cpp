#include <cmath>

#include "declip/simd/kernels.hpp"

#if defined(DECLIP_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace declip::simd {

#if defined(DECLIP_HAVE_AVX2)
namespace {

// std::complex<double> is two adjacent doubles, so a __m256d holds two
// complex values as [re0, im0, re1, im1].
inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = _mm256_loadu_pd(raw(a + i));
    const __m256d vb0 = _mm256_loadu_pd(raw(b + i));
    const __m256d va1 = _mm256_loadu_pd(raw(a + i + 2));
    const __m256d vb1 = _mm256_loadu_pd(raw(b + i + 2));
    re0 = _mm256_fmadd_pd(va0, vb0, re0);  // [ar*br, ai*bi]
    re1 = _mm256_fmadd_pd(va1, vb1, re1);
    im0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0x5), im0);  // [ar*bi, ai*br]
    im1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0x5), im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    re0 = _mm256_fmadd_pd(va, vb, re0);
    im0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), im0);
  }
  alignas(32) double r[4];
  alignas(32) double q[4];
  _mm256_store_pd(r, _mm256_add_pd(re0, re1));
  _mm256_store_pd(q, _mm256_add_pd(im0, im1));
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (q[0] - q[1]) + (q[2] - q[3]);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void magnitude(const cplx* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(raw(x + i));
    const __m256d v1 = _mm256_loadu_pd(raw(x + i + 2));
    // hadd interleaves by 128-bit lane: [|x0|^2, |x2|^2, |x1|^2, |x3|^2]
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    h = _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(h));
  }
  for (; i < n; ++i) {
    const double r = x[i].real(), q = x[i].imag();
    out[i] = std::sqrt(r * r + q * q);
  }
}

void mul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d t = _mm256_mul_pd(_mm256_permute_pd(va, 0x5), b_im);  // [ai*bi, ar*bi]
    _mm256_storeu_pd(raw(out + i), _mm256_fmaddsub_pd(va, b_re, t));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

void div(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d t = _mm256_mul_pd(_mm256_permute_pd(va, 0x5), b_im);
    const __m256d num = _mm256_fmsubadd_pd(va, b_re, t);  // a * conj(b)
    const __m256d sq = _mm256_mul_pd(vb, vb);
    const __m256d den = _mm256_hadd_pd(sq, sq);
    _mm256_storeu_pd(raw(out + i), _mm256_div_pd(num, den));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double d = br * br + bi * bi;
    out[i] = {(ar * br + ai * bi) / d, (ai * br - ar * bi) / d};
  }
}

void scale_real(const double* w, const cplx* x, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)),
                                             _MM_SHUFFLE(1, 1, 0, 0));
    _mm256_storeu_pd(raw(out + i), _mm256_mul_pd(ww, _mm256_loadu_pd(raw(x + i))));
  }
  for (; i < n; ++i) out[i] = {w[i] * x[i].real(), w[i] * x[i].imag()};
}

void sub(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(raw(out + i),
                     _mm256_sub_pd(_mm256_loadu_pd(raw(a + i)), _mm256_loadu_pd(raw(b + i))));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace

const KernelTable* avx2_kernels_unchecked() noexcept {
  static const KernelTable table{"avx2", dot_conj, magnitude, mul, div, scale_real, sub};
  return &table;
}
#else
const KernelTable* avx2_kernels_unchecked() noexcept { return nullptr; }
#endif

}  // namespace declip::simd
