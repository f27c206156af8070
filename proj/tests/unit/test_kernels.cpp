#include <doctest.h>

#include <cmath>
#include <vector>

#include "declip/rng.hpp"
#include "declip/simd/kernels.hpp"

using declip::cplx;
using declip::SplitMix64;
namespace simd = declip::simd;

namespace {

std::vector<cplx> random_vec(SplitMix64& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = rng.complex_gaussian(1.0);
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("scalar kernels match std::complex arithmetic") {
  SplitMix64 rng(11);
  const auto& k = simd::scalar_kernels();
  const std::size_t n = 37;
  auto a = random_vec(rng, n), b = random_vec(rng, n);
  std::vector<double> w(n);
  for (auto& x : w) x = rng.uniform();

  cplx dot{};
  for (std::size_t i = 0; i < n; ++i) dot += std::conj(a[i]) * b[i];
  CHECK(std::abs(k.dot_conj(a.data(), b.data(), n) - dot) < 1e-12);

  std::vector<cplx> out(n), ref(n);
  k.mul(a.data(), b.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) ref[i] = a[i] * b[i];
  CHECK(max_diff(out, ref) < 1e-14);
  k.div(a.data(), b.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) ref[i] = a[i] / b[i];
  CHECK(max_diff(out, ref) < 1e-12);
  k.scale_real(w.data(), a.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) ref[i] = w[i] * a[i];
  CHECK(max_diff(out, ref) < 1e-15);
  k.sub(a.data(), b.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) ref[i] = a[i] - b[i];
  CHECK(max_diff(out, ref) == 0.0);
  std::vector<double> mag(n);
  k.magnitude(a.data(), mag.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(mag[i] == doctest::Approx(std::abs(a[i])).epsilon(1e-15));
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const auto* v = simd::avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 not available; skipping vector kernel comparison");
    return;
  }
  const auto& s = simd::scalar_kernels();
  SplitMix64 rng(12);
  // Lengths straddle the 2-wide vector body and its tail.
  for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 64u, 275u, 512u}) {
    CAPTURE(n);
    auto a = random_vec(rng, n), b = random_vec(rng, n);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform();

    const cplx ds = s.dot_conj(a.data(), b.data(), n), dv = v->dot_conj(a.data(), b.data(), n);
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + static_cast<double>(n)));

    std::vector<cplx> os(n), ov(n);
    s.mul(a.data(), b.data(), os.data(), n);
    v->mul(a.data(), b.data(), ov.data(), n);
    CHECK(max_diff(os, ov) < 1e-14);
    s.div(a.data(), b.data(), os.data(), n);
    v->div(a.data(), b.data(), ov.data(), n);
    CHECK(max_diff(os, ov) < 1e-12);
    s.scale_real(w.data(), a.data(), os.data(), n);
    v->scale_real(w.data(), a.data(), ov.data(), n);
    CHECK(max_diff(os, ov) == 0.0);
    s.sub(a.data(), b.data(), os.data(), n);
    v->sub(a.data(), b.data(), ov.data(), n);
    CHECK(max_diff(os, ov) == 0.0);

    std::vector<double> ms(n), mv(n);
    s.magnitude(a.data(), ms.data(), n);
    v->magnitude(a.data(), mv.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(ms[i] == doctest::Approx(mv[i]).epsilon(1e-15));
  }
}

TEST_CASE("in-place kernel calls are allowed") {
  SplitMix64 rng(13);
  for (const auto* k : {&simd::scalar_kernels(), simd::avx2_kernels()}) {
    if (k == nullptr) continue;
    auto a = random_vec(rng, 9), b = random_vec(rng, 9);
    auto expect = a;
    for (std::size_t i = 0; i < a.size(); ++i) expect[i] = a[i] * b[i];
    k->mul(a.data(), b.data(), a.data(), a.size());
    CHECK(max_diff(a, expect) < 1e-14);
  }
}
