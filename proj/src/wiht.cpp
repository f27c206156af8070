#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "declip/fft.hpp"
#include "declip/simd/kernels.hpp"
#include "declip/sparse_recovery.hpp"

namespace declip {

std::size_t estimate_k(std::span<const double> correlation_magnitude, std::size_t rows,
                       double inflation) {
  if (!(inflation > 0.0)) throw std::invalid_argument("estimate_k: inflation must be > 0");
  const double peak = correlation_magnitude.empty()
                          ? 0.0
                          : *std::max_element(correlation_magnitude.begin(), correlation_magnitude.end());
  if (!(peak > 0.0)) return 0;
  const double half = 0.5 * peak;
  const auto above = static_cast<std::size_t>(
      std::count_if(correlation_magnitude.begin(), correlation_magnitude.end(),
                    [half](double c) { return c >= half; }));
  const auto inflated = static_cast<std::size_t>(std::ceil(static_cast<double>(above) * inflation));
  const std::size_t upper = std::max<std::size_t>(1, rows > 0 ? rows - 1 : 0);
  return std::clamp<std::size_t>(inflated, 1, upper);
}

std::size_t estimate_k(const SensingProblem& prob, double inflation) {
  const CVector corr = prob.correlate();
  std::vector<double> mag(corr.size());
  simd::kernels().magnitude(corr.data(), mag.data(), corr.size());
  return estimate_k(mag, prob.rows(), inflation);
}

double estimate_tau(const TimeFrame& clipped_estimate) {
  if (clipped_estimate.size() == 0) throw InputSizeError("estimate_tau: empty frame");
  double peak = 0.0;
  for (auto v : clipped_estimate.values) peak = std::max(peak, std::abs(v));
  return peak;
}

std::vector<double> weight_vector(const TimeFrame& clipped_estimate, double tau_hat) {
  std::vector<double> w(clipped_estimate.size());
  simd::kernels().magnitude(clipped_estimate.values.data(), w.data(), w.size());
  const double peak = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  if (tau_hat < peak * (1.0 - 1e-12)) {
    throw std::invalid_argument("weight_vector: tau_hat below the frame peak");
  }
  for (auto& v : w) v = std::exp(-(tau_hat - v));
  return w;
}

SupportSet hard_threshold(std::span<const double> magnitude, std::size_t k) {
  std::vector<std::size_t> nonzero;
  nonzero.reserve(magnitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    if (magnitude[i] != 0.0) nonzero.push_back(i);
  }
  const std::size_t keep = std::min(k, nonzero.size());
  std::partial_sort(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(keep), nonzero.end(),
                    [magnitude](std::size_t a, std::size_t b) {
                      return magnitude[a] > magnitude[b] || (magnitude[a] == magnitude[b] && a < b);
                    });
  SupportSet s{{nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(keep)}};
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

SupportSet hard_threshold(std::span<const cplx> v, std::size_t k) {
  std::vector<double> mag(v.size());
  simd::kernels().magnitude(v.data(), mag.data(), v.size());
  return hard_threshold(mag, k);
}

RecoveryResult wiht_recover(const FrequencyFrame& equalized, const SensingProblem& prob,
                            const WihtOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = prob.n();
  if (equalized.size() != n) throw InputSizeError("wiht_recover: frame length differs from N");
  const auto& kern = simd::kernels();
  OpCounter ops;
  RecoveryResult r;

  // Clipped-signal estimate, threshold and clipping-probability weights.
  const TimeFrame clipped = idft(equalized);
  ops.add(fft::mult_cost(n));
  std::vector<double> amp(n);
  kern.magnitude(clipped.values.data(), amp.data(), n);
  ops.add(n);
  r.tau_hat = *std::max_element(amp.begin(), amp.end());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(-(r.tau_hat - amp[i]));

  // Support from the weighted correlation A^H y.
  const CVector corr = prob.correlate(&ops);
  std::vector<double> corr_mag(n);
  kern.magnitude(corr.data(), corr_mag.data(), n);
  ops.add(n);
  const std::size_t upper = std::max<std::size_t>(1, prob.rows() > 0 ? prob.rows() - 1 : 0);
  const std::size_t estimated = estimate_k(corr_mag, prob.rows(), opts.k_inflation);
  r.k = (opts.fixed_k && estimated > 0) ? std::clamp<std::size_t>(*opts.fixed_k, 1, upper) : estimated;

  r.clip_estimate = TimeFrame(n);
  if (r.k == 0) {
    r.status = RecoveryStatus::NoClippingDetected;
  } else {
    // |W A^H y| = w .* |A^H y| since the weights are positive.
    for (std::size_t i = 0; i < n; ++i) corr_mag[i] *= w[i];
    ops.add(n);
    r.support = hard_threshold(corr_mag, r.k);
    try {
      r.clip_estimate = blue_estimate(prob, r.support, &ops, opts.blue).values;
    } catch (const NumericalFailure&) {
      r.status = RecoveryStatus::NumericalFallback;
    }
  }

  r.signal_estimate = TimeFrame(n);
  kern.sub(clipped.values.data(), r.clip_estimate.values.data(), r.signal_estimate.values.data(), n);
  r.mult_count = ops.mults();
  r.duration = std::chrono::steady_clock::now() - start;
  r.frequency_estimate = dft(r.signal_estimate);
  return r;
}

}  // namespace declip
