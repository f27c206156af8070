#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "declip/fft.hpp"
#include "declip/simd/kernels.hpp"
#include "declip/sparse_recovery.hpp"

namespace declip {
namespace {

void count(OpCounter* ops, std::uint64_t n) {
  if (ops) ops->add(n);
}

}  // namespace

ClipVector blue_estimate(const SensingProblem& prob, const SupportSet& support, OpCounter* ops,
                         const BlueOptions& opts) {
  const std::size_t n = prob.n();
  const std::size_t p = prob.rows();
  const std::size_t s = support.size();
  ClipVector out{TimeFrame(n), support.indices};
  if (s == 0) return out;
  if (s > p) {
    throw NumericalFailure("blue_estimate: support size " + std::to_string(s) +
                           " exceeds measurement count " + std::to_string(p));
  }
  for (auto j : support.indices) {
    if (j >= n) throw std::out_of_range("blue_estimate: support index outside [0, N)");
  }
  const auto& kern = simd::kernels();

  // A_S column-major so every Gram entry is one contiguous dot product.
  CVector cols(s * p);
  for (std::size_t j = 0; j < s; ++j) prob.column(support.indices[j], {cols.data() + j * p, p});
  CVector y(prob.measurement().begin(), prob.measurement().end());

  if (opts.whitened) {
    const auto var = prob.row_noise_var();
    if (var.size() != p) throw std::invalid_argument("blue_estimate: whitening needs row noise variances");
    std::vector<double> w(p);
    for (std::size_t k = 0; k < p; ++k) {
      if (!(var[k] > 0.0)) throw NumericalFailure("blue_estimate: nonpositive row noise variance");
      w[k] = 1.0 / std::sqrt(var[k]);
    }
    for (std::size_t j = 0; j < s; ++j) kern.scale_real(w.data(), cols.data() + j * p, cols.data() + j * p, p);
    kern.scale_real(w.data(), y.data(), y.data(), p);
    count(ops, p * (s + 1));
  }

  // Hermitian Gram matrix, upper triangle computed and mirrored.
  CVector gram(s * s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a; b < s; ++b) {
      const cplx g = kern.dot_conj(cols.data() + a * p, cols.data() + b * p, p);
      gram[a * s + b] = g;
      gram[b * s + a] = std::conj(g);
    }
    count(ops, p * (s - a));
  }
  CVector rhs(s);
  for (std::size_t a = 0; a < s; ++a) rhs[a] = kern.dot_conj(cols.data() + a * p, y.data(), p);
  count(ops, p * s);

  // Cholesky G = L L^H, L row-major lower triangular.
  CVector l(s * s);
  double diag_min = INFINITY, diag_max = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    const cplx* row_j = l.data() + j * s;
    const double d = gram[j * s + j].real() - kern.dot_conj(row_j, row_j, j).real();
    count(ops, j);
    if (!(d > 0.0)) throw NumericalFailure("blue_estimate: Gram matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l[j * s + j] = ljj;
    diag_min = std::min(diag_min, ljj);
    diag_max = std::max(diag_max, ljj);
    for (std::size_t i = j + 1; i < s; ++i) {
      // sum_k L[i][k] conj(L[j][k])
      const cplx acc = kern.dot_conj(row_j, l.data() + i * s, j);
      l[i * s + j] = (gram[i * s + j] - acc) / ljj;
      count(ops, j + 1);
    }
  }
  const double cond = (diag_max / diag_min) * (diag_max / diag_min);
  if (!(cond <= opts.max_condition)) {
    throw NumericalFailure("blue_estimate: Gram matrix condition estimate " + std::to_string(cond) +
                           " above limit");
  }

  // L u = rhs, then L^H c = u.
  CVector u(s);
  for (std::size_t i = 0; i < s; ++i) {
    cplx acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= l[i * s + k] * u[k];
    u[i] = acc / l[i * s + i].real();
    count(ops, i + 1);
  }
  CVector coef(s);
  for (std::size_t ii = s; ii-- > 0;) {
    cplx acc = u[ii];
    for (std::size_t k = ii + 1; k < s; ++k) acc -= std::conj(l[k * s + ii]) * coef[k];
    coef[ii] = acc / l[ii * s + ii].real();
    count(ops, s - ii);
  }

  for (std::size_t j = 0; j < s; ++j) out.values[support.indices[j]] = coef[j];
  return out;
}

RecoveryResult oracle_ls(const FrequencyFrame& equalized, const SensingProblem& prob,
                         const SupportSet& true_support, const BlueOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (equalized.size() != prob.n()) throw InputSizeError("oracle_ls: frame length differs from N");
  OpCounter ops;
  RecoveryResult r;
  TimeFrame clipped = idft(equalized);
  ops.add(fft::mult_cost(prob.n()));
  r.support = true_support;
  r.k = true_support.size();
  if (true_support.size() == 0) {
    r.clip_estimate = TimeFrame(prob.n());
    r.status = RecoveryStatus::NoClippingDetected;
  } else {
    try {
      r.clip_estimate = blue_estimate(prob, true_support, &ops, opts).values;
    } catch (const NumericalFailure&) {
      r.clip_estimate = TimeFrame(prob.n());
      r.status = RecoveryStatus::NumericalFallback;
    }
  }
  r.signal_estimate = TimeFrame(prob.n());
  simd::kernels().sub(clipped.values.data(), r.clip_estimate.values.data(),
                      r.signal_estimate.values.data(), prob.n());
  r.mult_count = ops.mults();
  r.duration = std::chrono::steady_clock::now() - start;
  r.frequency_estimate = dft(r.signal_estimate);
  return r;
}

}  // namespace declip
