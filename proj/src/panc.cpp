#include <chrono>
#include <cmath>

#include "declip/fft.hpp"
#include "declip/simd/kernels.hpp"
#include "declip/sparse_recovery.hpp"

namespace declip {

RecoveryResult panc_recover(const FrequencyFrame& received, const ChannelRealization& ch,
                            const PaModel& pa, const Constellation& qam, std::size_t iterations) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = received.size();
  const auto& kern = simd::kernels();
  OpCounter ops;
  RecoveryResult r;

  const FrequencyFrame equalized = equalize(received, ch);
  ops.add(n);

  FrequencyFrame current = equalized;
  std::vector<double> amp(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    const TimeFrame regenerated = idft(slicer(current, qam));
    ops.add(fft::mult_cost(n));

    // Predicted distortion clip(x~) - x~; only saturated samples change.
    kern.magnitude(regenerated.values.data(), amp.data(), n);
    ops.add(n);
    TimeFrame distortion(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (amp[i] > pa.threshold) {
        distortion[i] = pa.apply(regenerated[i]) - regenerated[i];
        ops.add(1);
      }
    }
    const FrequencyFrame spectrum = dft(distortion);
    ops.add(fft::mult_cost(n));
    kern.sub(equalized.values.data(), spectrum.values.data(), current.values.data(), n);
  }
  r.mult_count = ops.mults();
  r.duration = std::chrono::steady_clock::now() - start;

  // Time-domain views for callers that compare against x; not charged.
  const TimeFrame clipped = idft(equalized);
  r.signal_estimate = idft(current);
  r.clip_estimate = TimeFrame(n);
  kern.sub(clipped.values.data(), r.signal_estimate.values.data(), r.clip_estimate.values.data(), n);
  r.tau_hat = pa.threshold;
  r.frequency_estimate = std::move(current);
  return r;
}

}  // namespace declip
